#ifndef KGB_GRID_HPP
#define KGB_GRID_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace kgb {

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Periodic 1-D grid on [0, length). Spectral data are stored in FFT index
// order: index i in [0, n) carries the signed mode number
// j = i for i < n/2 and j = i - n for i >= n/2; wavenumber k_j = 2*pi*j/length.
// The Nyquist mode (i = n/2) is kept zero on all real fields.
struct Grid1D {
    std::size_t n = 0;
    double length = 0.0;

    Grid1D() = default;
    Grid1D(std::size_t n_points, double domain_length)
        : n(n_points), length(domain_length) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid1D: n must be a power of two >= 8");
        if (!(length > 0.0))
            throw std::invalid_argument("Grid1D: length must be positive");
    }

    double dx() const { return length / static_cast<double>(n); }
    double dk() const { return 2.0 * pi / length; }

    long mode(std::size_t i) const {
        return i < n / 2 ? static_cast<long>(i)
                         : static_cast<long>(i) - static_cast<long>(n);
    }
    double k(std::size_t i) const { return dk() * static_cast<double>(mode(i)); }
    double x(std::size_t i) const { return dx() * static_cast<double>(i); }

    // FFT index of signed mode j, or n for out-of-range modes.
    std::size_t index_of_mode(long j) const {
        long half = static_cast<long>(n) / 2;
        if (j < -half || j >= half) return n;
        return j >= 0 ? static_cast<std::size_t>(j)
                      : static_cast<std::size_t>(j + static_cast<long>(n));
    }

    bool operator==(const Grid1D& o) const {
        return n == o.n && length == o.length;
    }
    bool operator!=(const Grid1D& o) const { return !(*this == o); }
};

// Smallest power-of-two grid with dx <= dx_max (and at least min_n points).
inline Grid1D make_grid_max_dx(double length, double dx_max, std::size_t min_n = 8) {
    std::size_t n = min_n;
    while (length / static_cast<double>(n) > dx_max) n *= 2;
    return Grid1D(n, length);
}

}  // namespace kgb

#endif
