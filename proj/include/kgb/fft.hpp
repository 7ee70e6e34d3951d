#ifndef KGB_FFT_HPP
#define KGB_FFT_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace kgb {

using cplx = std::complex<double>;

// In-place iterative radix-2 FFT. sign = -1: forward (e^{-ikx} convention),
// sign = +1: inverse (unnormalized; caller divides by n where appropriate).
inline void fft_inplace(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: size must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double pi = 3.141592653589793238462643383279502884;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Fourier series coefficients of samples: c_k = (1/n) sum_x u(x) e^{-ikx}.
inline std::vector<cplx> fft_coeffs(std::vector<cplx> samples) {
    fft_inplace(samples, -1);
    const double inv = 1.0 / static_cast<double>(samples.size());
    for (auto& v : samples) v *= inv;
    return samples;
}

// Reconstruct samples from coefficients: u(x_i) = sum_k c_k e^{ik x_i}.
inline std::vector<cplx> fft_samples(std::vector<cplx> coeffs) {
    fft_inplace(coeffs, +1);
    return coeffs;
}

}  // namespace kgb

#endif
