#ifndef KGB_KGB_SYSTEM_HPP
#define KGB_KGB_SYSTEM_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kgb/dispersion.hpp"
#include "kgb/spectral.hpp"

namespace kgb {

// First-order form of the coupled model, in Fourier variables:
//   dt u_h  = i w1 Wu_h
//   dt Wu_h = i w1 (u_h + F_h)
//   dt v_h  = i w2 Wv_h
//   dt Wv_h = i w2 v_h + i w2^{-1} F_h
// with F = (u+v)^2, w1 = omega1(k), w2 = omega2(k).  This reproduces the
// second-order equations dt^2 u_h = -w1^2 (u_h + F_h) and
// dt^2 v_h = -w2^2 v_h - F_h.  The k = 0 row of Wu is identically zero.
//
// Realness: u, Wu, v are hermitian; Wv is anti-hermitian because (i w2)^{-1}
// is an imaginary even symbol.
struct KGBState {
    SpectralField u, wu, v, wv;
};

// Diagonal variables R_{+-1} = (u +- Wu)/sqrt2, R_{+-2} = (v +- Wv)/sqrt2:
//   dt R_{+-1} = +- i w1 R_{+-1} +- i w1     F_h / sqrt2
//   dt R_{+-2} = +- i w2 R_{+-2} +- i w2^{-1} F_h / sqrt2.
// R_{+1}, R_{-1} are each hermitian; R_{-2}(k) = conj(R_{+2}(-k)).
struct DiagonalState {
    SpectralField r1p, r1m, r2p, r2m;
};

inline double kgb_hermitian_defect(const KGBState& s) {
    double d = std::max(hermitian_defect(s.u), hermitian_defect(s.wu));
    d = std::max(d, hermitian_defect(s.v));
    // anti-hermitian check: i*Wv is hermitian
    SpectralField iwv = s.wv;
    for (auto& c : iwv.c) c *= cplx(0.0, 1.0);
    return std::max(d, hermitian_defect(iwv));
}

inline DiagonalState diagonalize(const KGBState& s) {
    const double r = 1.0 / std::sqrt(2.0);
    DiagonalState d;
    d.r1p = r * (s.u + s.wu);
    d.r1m = r * (s.u - s.wu);
    d.r2p = r * (s.v + s.wv);
    d.r2m = r * (s.v - s.wv);
    return d;
}

inline KGBState undiagonalize(const DiagonalState& d) {
    const double r = 1.0 / std::sqrt(2.0);
    KGBState s;
    s.u = r * (d.r1p + d.r1m);
    s.wu = r * (d.r1p - d.r1m);
    s.v = r * (d.r2p + d.r2m);
    s.wv = r * (d.r2p - d.r2m);
    return s;
}

// Dealiased coefficients of (u+v)^2 from diagonal variables.
inline SpectralField kgb_forcing(const DiagonalState& d) {
    const double r = 1.0 / std::sqrt(2.0);
    SpectralField s = r * (d.r1p + d.r1m + d.r2p + d.r2m);
    return convolve(s, s);
}

inline KGBState kgb_rhs(const KGBState& s) {
    SpectralField sum = s.u + s.v;
    SpectralField F = convolve(sum, sum);
    KGBState d;
    d.u = apply_symbol(s.wu, [](double k) { return cplx(0.0, omega1(k)); });
    d.wu = apply_symbol(s.u + F, [](double k) { return cplx(0.0, omega1(k)); });
    d.v = apply_symbol(s.wv, [](double k) { return cplx(0.0, omega2(k)); });
    d.wv = apply_symbol(s.v, [](double k) { return cplx(0.0, omega2(k)); })
         + apply_symbol(F, [](double k) { return cplx(0.0, 1.0 / omega2(k)); });
    return d;
}

inline DiagonalState diagonal_rhs_nonlinear(const DiagonalState& d) {
    SpectralField F = kgb_forcing(d);
    const double r = 1.0 / std::sqrt(2.0);
    DiagonalState out;
    out.r1p = apply_symbol(F, [r](double k) { return cplx(0.0, r * omega1(k)); });
    out.r1m = apply_symbol(F, [r](double k) { return cplx(0.0, -r * omega1(k)); });
    out.r2p = apply_symbol(F, [r](double k) { return cplx(0.0, r / omega2(k)); });
    out.r2m = apply_symbol(F, [r](double k) { return cplx(0.0, -r / omega2(k)); });
    return out;
}

namespace detail {

// e^{+- i omega tau} phases for one time increment on a fixed grid.
struct Phases {
    std::vector<cplx> p1, p2;  // e^{i w1 tau}, e^{i w2 tau}
    Phases(const Grid1D& g, double tau) : p1(g.n), p2(g.n) {
        for (std::size_t i = 0; i < g.n; ++i) {
            double k = g.k(i);
            p1[i] = std::polar(1.0, omega1(k) * tau);
            p2[i] = std::polar(1.0, omega2(k) * tau);
        }
    }
};

inline DiagonalState phase_shift(const DiagonalState& d, const Phases& ph) {
    DiagonalState out = d;
    for (std::size_t i = 0; i < d.r1p.size(); ++i) {
        out.r1p.c[i] = ph.p1[i] * d.r1p.c[i];
        out.r1m.c[i] = std::conj(ph.p1[i]) * d.r1m.c[i];
        out.r2p.c[i] = ph.p2[i] * d.r2p.c[i];
        out.r2m.c[i] = std::conj(ph.p2[i]) * d.r2m.c[i];
    }
    return out;
}

inline DiagonalState daxpy(const DiagonalState& a, double s, const DiagonalState& b) {
    DiagonalState out;
    out.r1p = a.r1p + s * b.r1p;
    out.r1m = a.r1m + s * b.r1m;
    out.r2p = a.r2p + s * b.r2p;
    out.r2m = a.r2m + s * b.r2m;
    return out;
}

}  // namespace detail

// Integrating-factor (Lawson) RK4 step: the linear phases are applied
// exactly, RK4 handles only the nonlinearity.
inline DiagonalState lawson_rk4_step(const DiagonalState& d, double dt,
                                     const detail::Phases& full, const detail::Phases& half) {
    using detail::daxpy;
    using detail::phase_shift;
    DiagonalState k1 = diagonal_rhs_nonlinear(d);
    DiagonalState base_half = phase_shift(daxpy(d, 0.5 * dt, k1), half);
    DiagonalState k2 = diagonal_rhs_nonlinear(base_half);
    DiagonalState k3 = diagonal_rhs_nonlinear(daxpy(phase_shift(d, half), 0.5 * dt, k2));
    DiagonalState k4 = diagonal_rhs_nonlinear(daxpy(phase_shift(d, full), dt, phase_shift(k3, half)));
    DiagonalState out = phase_shift(d, full);
    out = daxpy(out, dt / 6.0, phase_shift(k1, full));
    out = daxpy(out, dt / 3.0, phase_shift(k2, half));
    out = daxpy(out, dt / 3.0, phase_shift(k3, half));
    out = daxpy(out, dt / 6.0, k4);
    return out;
}

// Advance to time T with steps of size at most dt_max, landing exactly on T.
inline DiagonalState kgb_solve(DiagonalState d, double T, double dt_max) {
    if (T < 0.0 || dt_max <= 0.0) throw std::invalid_argument("kgb_solve: bad arguments");
    if (T == 0.0) return d;
    std::size_t nsteps = static_cast<std::size_t>(std::ceil(T / dt_max - 1e-12));
    double dt = T / static_cast<double>(nsteps);
    detail::Phases full(d.r1p.grid, dt), half(d.r1p.grid, 0.5 * dt);
    for (std::size_t i = 0; i < nsteps; ++i) d = lawson_rk4_step(d, dt, full, half);
    return d;
}

// State from physical initial data (u, dt u, v, dt v):
//   Wu = (i w1)^{-1} dt u  (k = 0 row set to zero; dt u must have zero mean),
//   Wv = (i w2)^{-1} dt v.
inline KGBState kgb_state_from_physical(const SpectralField& u0, const SpectralField& ut0,
                                        const SpectralField& v0, const SpectralField& vt0) {
    KGBState s;
    s.u = u0;
    s.v = v0;
    s.wu = SpectralField(u0.grid);
    for (std::size_t i = 1; i < u0.size(); ++i) {
        if (i == u0.grid.n / 2) continue;
        s.wu.c[i] = ut0.c[i] / cplx(0.0, omega1(u0.grid.k(i)));
    }
    s.wv = apply_symbol(vt0, [](double k) { return cplx(1.0) / cplx(0.0, omega2(k)); });
    return s;
}

}  // namespace kgb

#endif
