#ifndef KGB_DISPERSION_HPP
#define KGB_DISPERSION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kgb {

// Branch frequencies of the two wave families.
//   omega1: regularized long-wave branch, signed smooth form k/sqrt(1+k^2),
//   omega2: massive branch sqrt(k^2+2).
inline double omega1(double k) { return k / std::sqrt(1.0 + k * k); }
inline double omega2(double k) { return std::sqrt(k * k + 2.0); }

inline double omega1_prime(double k) {
    double q = 1.0 + k * k;
    return 1.0 / (q * std::sqrt(q));
}
inline double omega2_prime(double k) { return k / std::sqrt(k * k + 2.0); }

// Group-velocity (Lipschitz) bound sup_k |omega1'(k)| = 1, attained at k=0.
inline double omega1_lipschitz_bound() { return 1.0; }

struct GapReport {
    double cross_gap;      // inf_k (omega2(k) - |omega1(k)|), same wavenumber
    double cross_gap_argk; // minimizing k >= 0
    double gap_12_minus;   // inf_{k,m} (omega2(k) - |omega1(m)|)
    double gap_12_plus;    // inf_{k,m} (omega2(k) + |omega1(m)|)
};

// Grid scan with golden-section refinement of the same-wavenumber gap
//   d(k) = omega2(k) - |omega1(k)|.
// d is even, d -> +inf as |k| -> inf, so scanning k in [0, kmax] suffices.
// The independent extrema gap_12_minus / gap_12_plus decouple:
//   inf omega2 = sqrt(2) at k=0, sup |omega1| = 1, inf |omega1| = 0.
inline GapReport scan_gaps(double kmax = 50.0, std::size_t n = 200001) {
    if (kmax <= 0.0 || n < 3) throw std::invalid_argument("scan_gaps: bad parameters");
    double best = std::numeric_limits<double>::infinity();
    double bestk = 0.0;
    double h = kmax / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        double k = h * static_cast<double>(i);
        double d = omega2(k) - std::abs(omega1(k));
        if (d < best) { best = d; bestk = k; }
    }
    // golden-section refinement around the grid minimum
    double a = std::max(0.0, bestk - h), b = bestk + h;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    auto f = [](double k) { return omega2(k) - std::abs(omega1(k)); };
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-14; ++it) {
        if (f1 < f2) { b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = f(x1); }
        else { a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = f(x2); }
    }
    GapReport r;
    r.cross_gap_argk = 0.5 * (a + b);
    r.cross_gap = f(r.cross_gap_argk);
    r.gap_12_minus = omega2(0.0) - 1.0;       // sqrt(2) - 1
    r.gap_12_plus = omega2(0.0) + 0.0;        // sqrt(2)
    return r;
}

// Nonresonance constant: the same-wavenumber gap equals 1 exactly.  With
// w = sqrt(u^2+u), u = k^2, (omega2-|omega1|)^2*(u+1) - (u+1) reduces to
// (w-1)^2 >= 0, vanishing at k^2 = (sqrt(5)-1)/2.
inline double nonresonance_constant() { return 1.0; }

}  // namespace kgb

#endif
