#ifndef KGB_KERNEL_HPP
#define KGB_KERNEL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "kgb/grid.hpp"
#include "kgb/spectral.hpp"

namespace kgb {

// Two-argument Fourier kernel f(k, l): k is the output wavenumber (one row
// per grid mode, ascending, row r <-> mode j = r - n/2), l the convolution
// offset (columns, modes -omax..omax in units of dk).  A kernel acts on a
// field as a Riemann-sum integral operator on Fourier densities,
//   c'_j = dk * sum_o f(j, o) c_{j-o},
// so multiplication by a function psi is the kernel f(j, o) = c^psi_o / dk,
// constant in j.  Out-of-range rows or offsets read as zero (no wrap).
struct Kernel2 {
    Grid1D grid;
    long omax = 0;
    std::vector<cplx> a;  // row-major, grid.n rows x (2*omax+1) cols

    Kernel2() = default;
    Kernel2(const Grid1D& g, long omax_) : grid(g), omax(omax_) {
        if (omax_ < 0 || 2 * omax_ + 1 > static_cast<long>(g.n))
            throw std::invalid_argument("Kernel2: bad offset range");
        a.assign(g.n * static_cast<std::size_t>(2 * omax + 1), cplx(0.0));
    }

    long cols() const { return 2 * omax + 1; }
    long half_n() const { return static_cast<long>(grid.n) / 2; }

    bool row_in_range(long jmode) const { return jmode >= -half_n() && jmode < half_n(); }

    cplx& ref(long jmode, long omode) {
        return a[static_cast<std::size_t>((jmode + half_n()) * cols() + (omode + omax))];
    }
    cplx value(long jmode, long omode) const {
        if (!row_in_range(jmode) || omode < -omax || omode > omax) return cplx(0.0);
        return a[static_cast<std::size_t>((jmode + half_n()) * cols() + (omode + omax))];
    }

    static Kernel2 identity(const Grid1D& g) {
        Kernel2 f(g, 0);
        const cplx v(1.0 / g.dk());
        // The Nyquist row stays zero: operators annihilate the unresolved mode,
        // which keeps the k -> -k reflection an involution on kernel rows.
        for (std::size_t r = 1; r < g.n; ++r) f.a[r] = v;
        return f;
    }

    // Multiplication operator by the field psi; offset support is the set of
    // modes of psi above rel_tol (relative to the largest coefficient).
    static Kernel2 from_field(const SpectralField& psi, double rel_tol = 0.0) {
        double cmax = 0.0;
        for (auto& v : psi.c) cmax = std::max(cmax, std::abs(v));
        long omax = 0;
        for (std::size_t i = 0; i < psi.size(); ++i) {
            long j = psi.grid.mode(i);
            if (std::abs(psi.c[i]) > rel_tol * cmax) omax = std::max(omax, std::labs(j));
        }
        omax = std::min(omax, static_cast<long>(psi.grid.n) / 2 - 1);
        Kernel2 f(psi.grid, omax);
        const double dk = psi.grid.dk();
        for (long o = -omax; o <= omax; ++o) {
            cplx v = psi.c[psi.grid.index_of_mode(o)] / dk;
            for (long j = -f.half_n() + 1; j < f.half_n(); ++j) f.ref(j, o) = v;
        }
        return f;
    }
};

inline double kernel_max_abs(const Kernel2& f) {
    double m = 0.0;
    for (auto& v : f.a) m = std::max(m, std::abs(v));
    return m;
}

// Largest |f| over each offset column.
inline std::vector<double> column_sup(const Kernel2& f) {
    std::vector<double> s(static_cast<std::size_t>(f.cols()), 0.0);
    for (std::size_t r = 0; r < f.grid.n; ++r)
        for (long c = 0; c < f.cols(); ++c)
            s[static_cast<std::size_t>(c)] =
                std::max(s[static_cast<std::size_t>(c)],
                         std::abs(f.a[r * static_cast<std::size_t>(f.cols()) + static_cast<std::size_t>(c)]));
    return s;
}

// Weighted operator-norm bound: dk * sum_l sup_k |f(k,l)| (1+(l/eps)^2)^{s/2}.
// The rescaled offset l/eps is the slow-scale wavenumber of the coefficient.
inline double kernel_xnorm(const Kernel2& f, double eps, double s) {
    auto sup = column_sup(f);
    const double dk = f.grid.dk();
    double acc = 0.0;
    for (long o = -f.omax; o <= f.omax; ++o) {
        double K = static_cast<double>(o) * dk / eps;
        acc += sup[static_cast<std::size_t>(o + f.omax)] * std::pow(1.0 + K * K, 0.5 * s);
    }
    return dk * acc;
}

// Drop outer offset columns with sup below rel_tol * (largest column sup).
inline Kernel2 kernel_trim(const Kernel2& f, double rel_tol) {
    auto sup = column_sup(f);
    double smax = 0.0;
    for (double v : sup) smax = std::max(smax, v);
    long keep = 0;
    for (long o = -f.omax; o <= f.omax; ++o)
        if (sup[static_cast<std::size_t>(o + f.omax)] > rel_tol * smax)
            keep = std::max(keep, std::labs(o));
    if (keep == f.omax) return f;
    Kernel2 out(f.grid, keep);
    for (long j = -f.half_n(); j < f.half_n(); ++j)
        for (long o = -keep; o <= keep; ++o) out.ref(j, o) = f.value(j, o);
    return out;
}

inline SpectralField kernel_apply(const Kernel2& f, const SpectralField& u) {
    if (f.grid != u.grid) throw std::invalid_argument("kernel_apply: grid mismatch");
    SpectralField out(u.grid);
    const double dk = u.grid.dk();
    const long hn = f.half_n();
    for (long j = -hn; j < hn; ++j) {
        cplx s(0.0);
        for (long o = -f.omax; o <= f.omax; ++o) {
            long m = j - o;
            if (m < -hn || m >= hn) continue;
            s += f.value(j, o) * u.c[u.grid.index_of_mode(m)];
        }
        out.c[u.grid.index_of_mode(j)] = dk * s;
    }
    return out;
}

// Kernel of x -> F(G(x)):  h(j, o) = dk * sum_a f(j, a) g(j-a, o-a).
inline Kernel2 kernel_compose(const Kernel2& f, const Kernel2& g, double trim_tol = 0.0) {
    if (f.grid != g.grid) throw std::invalid_argument("kernel_compose: grid mismatch");
    long homax = std::min(f.omax + g.omax, static_cast<long>(f.grid.n) / 2 - 1);
    Kernel2 h(f.grid, homax);
    const double dk = f.grid.dk();
    const long hn = f.half_n();
    for (long j = -hn; j < hn; ++j) {
        const cplx* frow = &f.a[static_cast<std::size_t>((j + hn) * f.cols())];
        for (long ai = 0; ai < f.cols(); ++ai) {
            cplx fv = frow[ai];
            if (fv == cplx(0.0)) continue;
            long amode = ai - f.omax;
            long gj = j - amode;
            if (gj < -hn || gj >= hn) continue;
            const cplx* grow = &g.a[static_cast<std::size_t>((gj + hn) * g.cols())];
            cplx* hrow = &h.a[static_cast<std::size_t>((j + hn) * h.cols())];
            // o = amode + bmode, column index in h: o + homax = ai - f.omax + bi - g.omax + homax
            long base = ai - f.omax - g.omax + homax;
            for (long bi = 0; bi < g.cols(); ++bi) hrow[base + bi] += fv * grow[bi];
        }
    }
    for (auto& v : h.a) v *= dk;
    if (trim_tol > 0.0) return kernel_trim(h, trim_tol);
    return h;
}

inline Kernel2 kernel_scaled(const Kernel2& f, cplx s) {
    Kernel2 out = f;
    for (auto& v : out.a) v *= s;
    return out;
}

// h += s * f  (offset ranges may differ; h must be at least as wide).
inline void kernel_axpy(Kernel2& h, cplx s, const Kernel2& f) {
    if (h.grid != f.grid) throw std::invalid_argument("kernel_axpy: grid mismatch");
    if (f.omax > h.omax) throw std::invalid_argument("kernel_axpy: target too narrow");
    for (long j = -h.half_n(); j < h.half_n(); ++j)
        for (long o = -f.omax; o <= f.omax; ++o) h.ref(j, o) += s * f.value(j, o);
}

inline Kernel2 kernel_sum(const std::vector<const Kernel2*>& parts) {
    if (parts.empty()) throw std::invalid_argument("kernel_sum: empty");
    long omax = 0;
    for (auto* p : parts) omax = std::max(omax, p->omax);
    Kernel2 h(parts[0]->grid, omax);
    for (auto* p : parts) kernel_axpy(h, cplx(1.0), *p);
    return h;
}

// Multiply each row by a symbol m(k).
inline Kernel2 kernel_scale_rows(const Kernel2& f, const std::function<cplx(double)>& m) {
    Kernel2 out = f;
    const double dk = f.grid.dk();
    for (long j = -f.half_n(); j < f.half_n(); ++j) {
        cplx mv = m(static_cast<double>(j) * dk);
        for (long o = -f.omax; o <= f.omax; ++o) out.ref(j, o) = mv * f.value(j, o);
    }
    return out;
}

// Reflection conjugate ftilde(k, l) = conj(f(-k, -l)); closed under compose.
inline Kernel2 kernel_reflconj(const Kernel2& f) {
    Kernel2 out(f.grid, f.omax);
    for (long j = -f.half_n(); j < f.half_n(); ++j)
        for (long o = -f.omax; o <= f.omax; ++o) out.ref(j, o) = std::conj(f.value(-j, -o));
    return out;
}

inline double kernel_diff_max(const Kernel2& f, const Kernel2& g) {
    if (f.grid != g.grid) throw std::invalid_argument("kernel_diff_max: grid mismatch");
    long omax = std::max(f.omax, g.omax);
    double d = 0.0;
    for (long j = -f.half_n(); j < f.half_n(); ++j)
        for (long o = -omax; o <= omax; ++o) d = std::max(d, std::abs(f.value(j, o) - g.value(j, o)));
    return d;
}

// Defect of the offset-conjugation symmetry f(k, l) = conj(f(k, -l)).
inline double kernel_conjl_defect(const Kernel2& f) {
    double d = 0.0;
    for (long j = -f.half_n(); j < f.half_n(); ++j)
        for (long o = 0; o <= f.omax; ++o)
            d = std::max(d, std::abs(f.value(j, o) - std::conj(f.value(j, -o))));
    return d;
}

}  // namespace kgb

#endif
