#ifndef KGB_WHITHAM_HPP
#define KGB_WHITHAM_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kgb/spectral.hpp"

namespace kgb {

// Slaving of the massive component to the long-wave amplitude:
//   v = H(u) solves  -2*H - (u + H)^2 = 0   with  H(0) = 0, H'(0) = 0,
// i.e. H(u) = -(1+u) + sqrt(1+2u), well defined for u > -1/2.
inline double slaving_h(double u) { return -(1.0 + u) + std::sqrt(1.0 + 2.0 * u); }
inline double slaving_h1(double u) { return -1.0 + 1.0 / std::sqrt(1.0 + 2.0 * u); }
inline double slaving_h2(double u) { return -std::pow(1.0 + 2.0 * u, -1.5); }
inline double slaving_h3(double u) { return 3.0 * std::pow(1.0 + 2.0 * u, -2.5); }
inline double slaving_h4(double u) { return -15.0 * std::pow(1.0 + 2.0 * u, -3.5); }

// Flux of the limit system:  G(u) = u + (u + H(u))^2  ( = u - 2 H(u) ).
inline double flux_g(double u) { return u + (u + slaving_h(u)) * (u + slaving_h(u)); }
inline double flux_g1(double u) { return 1.0 + 2.0 * (u + slaving_h(u)) * (1.0 + slaving_h1(u)); }
inline double flux_g2(double u) {
    double s = u + slaving_h(u), sp = 1.0 + slaving_h1(u);
    return 2.0 * (sp * sp + s * slaving_h2(u));
}
inline double flux_g3(double u) {
    double s = u + slaving_h(u), sp = 1.0 + slaving_h1(u);
    return 2.0 * (3.0 * sp * slaving_h2(u) + s * slaving_h3(u));
}

struct WhithamState {
    SpectralField u;  // long-wave amplitude, slow variables (X, T)
    SpectralField w;  // companion with  dT u = dX w
};

// Apply a pointwise function to a spectral field (dealiased).
inline SpectralField pointwise(const SpectralField& f, double (*fn)(double)) {
    auto s = transform_inverse_real(f);
    for (auto& v : s) v = fn(v);
    auto out = transform_forward_real(f.grid, s);
    dealias(out);
    return out;
}

// dT u = dX w,  dT w = dX G(u).  The slaving and its expansion need
// 1 + 2u > 0 pointwise; enforced with margin because the corrector below
// also divides by 1 + u + H(u).
inline WhithamState whitham_rhs(const WhithamState& st) {
    auto us = transform_inverse_real(st.u);
    for (double v : us)
        if (!(1.0 + 2.0 * v > 1e-6)) throw std::domain_error("whitham_rhs: slaving gate 1+2u>0 violated");
    WhithamState d;
    d.u = derivative(st.w);
    d.w = derivative(pointwise(st.u, &flux_g));
    return d;
}

inline WhithamState axpy_state(const WhithamState& a, double s, const WhithamState& b) {
    WhithamState out;
    out.u = a.u + s * b.u;
    out.w = a.w + s * b.w;
    return out;
}

// Classical RK4 step.
inline WhithamState whitham_rk4_step(const WhithamState& st, double dt) {
    WhithamState k1 = whitham_rhs(st);
    WhithamState k2 = whitham_rhs(axpy_state(st, 0.5 * dt, k1));
    WhithamState k3 = whitham_rhs(axpy_state(st, 0.5 * dt, k2));
    WhithamState k4 = whitham_rhs(axpy_state(st, dt, k3));
    WhithamState out = axpy_state(st, dt / 6.0, k1);
    out = axpy_state(out, dt / 3.0, k2);
    out = axpy_state(out, dt / 3.0, k3);
    out = axpy_state(out, dt / 6.0, k4);
    enforce_hermitian(out.u);
    enforce_hermitian(out.w);
    return out;
}

// Integrate to time T with steps of size at most dt_max, landing exactly on T.
inline WhithamState whitham_solve(WhithamState st, double T, double dt_max) {
    if (T < 0.0 || dt_max <= 0.0) throw std::invalid_argument("whitham_solve: bad arguments");
    if (T == 0.0) return st;
    std::size_t nsteps = static_cast<std::size_t>(std::ceil(T / dt_max - 1e-12));
    double dt = T / static_cast<double>(nsteps);
    for (std::size_t i = 0; i < nsteps; ++i) st = whitham_rk4_step(st, dt);
    return st;
}

}  // namespace kgb

#endif
