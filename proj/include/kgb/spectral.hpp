#ifndef KGB_SPECTRAL_HPP
#define KGB_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgb/fft.hpp"
#include "kgb/grid.hpp"

namespace kgb {

// Fourier coefficients of a periodic field: u(x) = sum_j c_j e^{i k_j x},
// stored in FFT index order on the attached grid.
//
// Normalization conventions used throughout:
//   * physical L2 norm:  ||u||_{L2}^2 = length * sum_j |c_j|^2  (Parseval),
//   * the continuum Fourier-transform density is c_j / dk,
//   * pointwise products in x correspond to plain coefficient convolution
//     (no extra factor), with 2/3-rule dealiasing applied after each product.
struct SpectralField {
    Grid1D grid;
    std::vector<cplx> c;

    SpectralField() = default;
    explicit SpectralField(const Grid1D& g) : grid(g), c(g.n, cplx(0.0)) {}

    std::size_t size() const { return c.size(); }
    cplx& operator[](std::size_t i) { return c[i]; }
    const cplx& operator[](std::size_t i) const { return c[i]; }
};

inline void require_same_grid(const SpectralField& a, const SpectralField& b) {
    if (a.grid != b.grid)
        throw std::invalid_argument("spectral: grid mismatch");
}

inline SpectralField transform_forward(const Grid1D& g, const std::vector<cplx>& samples) {
    if (samples.size() != g.n)
        throw std::invalid_argument("transform_forward: sample count != grid size");
    SpectralField f(g);
    f.c = fft_coeffs(samples);
    f.c[g.n / 2] = 0.0;  // Nyquist zeroed on all fields
    return f;
}

inline SpectralField transform_forward_real(const Grid1D& g, const std::vector<double>& samples) {
    std::vector<cplx> s(samples.begin(), samples.end());
    return transform_forward(g, s);
}

inline std::vector<cplx> transform_inverse(const SpectralField& f) {
    return fft_samples(f.c);
}

inline std::vector<double> transform_inverse_real(const SpectralField& f) {
    auto s = fft_samples(f.c);
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i].real();
    return out;
}

// Build a field by sampling a function of x on the grid.
inline SpectralField sample_function(const Grid1D& g, const std::function<double(double)>& fn) {
    std::vector<double> s(g.n);
    for (std::size_t i = 0; i < g.n; ++i) s[i] = fn(g.x(i));
    return transform_forward_real(g, s);
}

// Multiply coefficients by a Fourier symbol m(k).
inline SpectralField apply_symbol(const SpectralField& f, const std::function<cplx(double)>& symbol) {
    SpectralField out(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) out.c[i] = symbol(f.grid.k(i)) * f.c[i];
    out.c[f.grid.n / 2] = 0.0;
    return out;
}

inline SpectralField derivative(const SpectralField& f, int order = 1) {
    SpectralField out(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
        cplx ik(0.0, f.grid.k(i));
        cplx m(1.0);
        for (int p = 0; p < order; ++p) m *= ik;
        out.c[i] = m * f.c[i];
    }
    out.c[f.grid.n / 2] = 0.0;
    return out;
}

// Antiderivative with zero mean; the k=0 coefficient of f must vanish.
inline SpectralField antiderivative(const SpectralField& f, double zero_mode_tol = 1e-10) {
    double scale = 0.0;
    for (auto& v : f.c) scale = std::max(scale, std::abs(v));
    if (std::abs(f.c[0]) > zero_mode_tol * std::max(scale, 1.0))
        throw std::invalid_argument("antiderivative: field has nonzero mean");
    SpectralField out(f.grid);
    for (std::size_t i = 1; i < f.size(); ++i) {
        if (i == f.grid.n / 2) continue;
        out.c[i] = f.c[i] / cplx(0.0, f.grid.k(i));
    }
    return out;
}

// 2/3-rule dealiasing: zero all modes with |j| > n/3.
inline void dealias(SpectralField& f) {
    const long cut = static_cast<long>(f.grid.n) / 3;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (std::labs(f.grid.mode(i)) > cut) f.c[i] = 0.0;
}

// Coefficients of the pointwise product f*g (dealiased).
inline SpectralField convolve(const SpectralField& f, const SpectralField& g) {
    require_same_grid(f, g);
    auto fs = fft_samples(f.c);
    auto gs = fft_samples(g.c);
    for (std::size_t i = 0; i < fs.size(); ++i) fs[i] *= gs[i];
    SpectralField out(f.grid);
    out.c = fft_coeffs(fs);
    out.c[f.grid.n / 2] = 0.0;
    dealias(out);
    return out;
}

inline double l2_norm(const SpectralField& f) {
    double s = 0.0;
    for (auto& v : f.c) s += std::norm(v);
    return std::sqrt(f.grid.length * s);
}

// H^s norm, derivative form: (sum_{j<=s} ||d^j f||_{L2}^2)^{1/2}.
inline double sobolev_norm(const SpectralField& f, int s) {
    if (s < 0) throw std::invalid_argument("sobolev_norm: s must be >= 0");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double k2 = f.grid.k(i) * f.grid.k(i);
        double w = 1.0, kp = 1.0;
        for (int j = 1; j <= s; ++j) { kp *= k2; w += kp; }
        acc += w * std::norm(f.c[i]);
    }
    return std::sqrt(f.grid.length * acc);
}

// H^0_s norm, Fourier-weighted form: weight (1+k^2)^{s/2} on each mode.
inline double sobolev_norm_weighted(const SpectralField& f, double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double k2 = f.grid.k(i) * f.grid.k(i);
        acc += std::pow(1.0 + k2, s) * std::norm(f.c[i]);
    }
    return std::sqrt(f.grid.length * acc);
}

inline double sup_norm(const SpectralField& f) {
    auto s = fft_samples(f.c);
    double m = 0.0;
    for (auto& v : s) m = std::max(m, std::abs(v));
    return m;
}

// Hermitian-symmetry defect max_k |c(-k) - conj(c(k))| of a real field.
inline double hermitian_defect(const SpectralField& f) {
    double d = std::abs(f.c[0].imag());
    for (std::size_t i = 1; i < f.size(); ++i) {
        long j = f.grid.mode(i);
        std::size_t im = f.grid.index_of_mode(-j);
        if (im >= f.grid.n) continue;
        d = std::max(d, std::abs(f.c[im] - std::conj(f.c[i])));
    }
    return d;
}

inline void enforce_hermitian(SpectralField& f) {
    f.c[0] = f.c[0].real();
    for (std::size_t i = 1; i < f.grid.n / 2; ++i) {
        std::size_t im = f.grid.index_of_mode(-f.grid.mode(i));
        cplx avg = 0.5 * (f.c[i] + std::conj(f.c[im]));
        f.c[i] = avg;
        f.c[im] = std::conj(avg);
    }
    f.c[f.grid.n / 2] = 0.0;
}

// Spectral interpolation of a slow-grid field onto a fine grid covering the
// same period: coefficients are copied mode-by-mode (zero padding).
inline SpectralField upsample(const SpectralField& f, const Grid1D& fine) {
    if (fine.n < f.grid.n)
        throw std::invalid_argument("upsample: target grid is coarser");
    SpectralField out(fine);
    for (std::size_t i = 0; i < f.size(); ++i) {
        long j = f.grid.mode(i);
        if (std::labs(j) >= static_cast<long>(f.grid.n) / 2) continue;
        out.c[fine.index_of_mode(j)] = f.c[i];
    }
    return out;
}

inline SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a, b);
    SpectralField out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out.c[i] = a.c[i] + b.c[i];
    return out;
}

inline SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a, b);
    SpectralField out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out.c[i] = a.c[i] - b.c[i];
    return out;
}

inline SpectralField operator*(double s, const SpectralField& a) {
    SpectralField out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out.c[i] = s * a.c[i];
    return out;
}

}  // namespace kgb

#endif
