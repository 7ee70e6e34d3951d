#ifndef KGB_ENERGY_HPP
#define KGB_ENERGY_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include "kgb/dispersion.hpp"
#include "kgb/kernel.hpp"
#include "kgb/kgb_system.hpp"
#include "kgb/spectral.hpp"

namespace kgb {

// Quadratic energy of the (transformed) first-order error variables:
//   E_{s,u} = sum_{j<=s}   int |k|^{2j} (|Ru|^2 + |Wu|^2) dk,
//   E_{s,v} = sum_{j<=s-1} int |k|^{2j} w2(k)^2 (|Rv|^2 + |Wv|^2) dk,
// discretized as (1/dk) * sum over coefficients.
inline double energy_quadratic(const KGBState& s, int sord) {
    if (sord < 1) throw std::invalid_argument("energy_quadratic: s must be >= 1");
    const Grid1D& g = s.u.grid;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        double k2 = g.k(i) * g.k(i);
        double wu = 1.0, kp = 1.0;
        for (int j = 1; j <= sord; ++j) { kp *= k2; wu += kp; }
        double wv = 1.0; kp = 1.0;
        for (int j = 1; j <= sord - 1; ++j) { kp *= k2; wv += kp; }
        double w22 = k2 + 2.0;
        acc += wu * (std::norm(s.u.c[i]) + std::norm(s.wu.c[i]));
        acc += wv * w22 * (std::norm(s.v.c[i]) + std::norm(s.wv.c[i]));
    }
    return acc / g.dk();
}

// Cross term  sum_{j<=jmax} int int |k|^j conj(R(k)) |m|^j R(m) F(k, k-m) dm dk
// for one family.  With hermitize set, the kernel is symmetrized as
//   F(k, m) = (f(k, k-m) + conj(f(m, k-m))) / 2,
// which makes the sum exactly real; the two forms differ at O(eps) by the
// slow-variation property of f.  In coefficient form the dk factors cancel.
inline cplx energy_cross_family(const SpectralField& r, const Kernel2& f, int jmax, bool hermitize) {
    if (r.grid != f.grid) throw std::invalid_argument("energy_cross_family: grid mismatch");
    const Grid1D& g = r.grid;
    const long hn = static_cast<long>(g.n) / 2;
    cplx acc(0.0);
    for (long jk = -hn; jk < hn; ++jk) {
        cplx ck = r.c[g.index_of_mode(jk)];
        if (ck == cplx(0.0)) continue;
        double k = static_cast<double>(jk) * g.dk();
        for (long o = -f.omax; o <= f.omax; ++o) {
            long jm = jk - o;
            if (jm < -hn || jm >= hn) continue;
            cplx fv = f.value(jk, o);
            if (hermitize) fv = 0.5 * (fv + std::conj(f.value(jm, o)));
            if (fv == cplx(0.0)) continue;
            cplx cm = r.c[g.index_of_mode(jm)];
            double m = static_cast<double>(jm) * g.dk();
            double km = std::abs(k * m), kmj = 1.0, wsum = 1.0;
            for (int j = 1; j <= jmax; ++j) { kmj *= km; wsum += kmj; }
            acc += wsum * std::conj(ck) * cm * fv;
        }
    }
    return acc;
}

struct EnergyReport {
    double total;        // E_s + cross_u + cross_v (real parts)
    double quadratic;
    double cross_u;
    double cross_v;
    double imag_defect;  // |Im| of the assembled cross terms
};

// Modified energy: cross kernels are f_u = 2 f_{1,res}, f_v = 2 f_{2,res};
// the v cross term carries the same j-range as E_{s,v} (j <= s-1).
inline EnergyReport energy_modified(const KGBState& s, const Kernel2& fu, const Kernel2& fv,
                                    int sord, bool hermitize = true) {
    EnergyReport r;
    r.quadratic = energy_quadratic(s, sord);
    cplx cu = energy_cross_family(s.u, fu, sord, hermitize);
    cplx cv = energy_cross_family(s.v, fv, sord - 1, hermitize);
    r.cross_u = cu.real();
    r.cross_v = cv.real();
    r.imag_defect = std::abs(cu.imag()) + std::abs(cv.imag());
    r.total = r.quadratic + r.cross_u + r.cross_v;
    return r;
}

}  // namespace kgb

#endif
