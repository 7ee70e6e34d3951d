#ifndef KGB_ANSATZ_HPP
#define KGB_ANSATZ_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kgb/dispersion.hpp"
#include "kgb/spectral.hpp"
#include "kgb/whitham.hpp"

namespace kgb {

// Long-wave approximation built from a slow state (U, W):
//   psi_u(x, t) = U(X, T),
//   psi_v(x, t) = V(X, T) + eps^2 V2(X, T),   X = eps x, T = eps t,
// with V = H(U) and the corrector
//   V2 = (dX^2 V - dT^2 V) / (2 (1 + U + V)).
// All T-derivatives below are evaluated through the slow system
// dT U = dX W, dT W = dX G(U), so no numerical time differencing enters.
//
// Substituting into the full model, the order-eps^2 blocks cancel exactly and
//   res_u = -eps^4 dX^2[ dT^2 U / dX^2 ... ]  -- concretely:
//   res_u = -eps^4 dX^2[ U2 + 2 (U+V) V2 ] - eps^6 dX^2[ V2^2 ],
//   res_v =  eps^4 [ dT^2 V2 - dX^2 V2 + V2^2 ],
// with U2 = dT^2 U.  Stored here as slow profiles a, b with
//   res_u = eps^4 * res_u_a + eps^6 * res_u_b,  res_v = eps^4 * res_v_a.
struct SlowProfiles {
    SpectralField U, W;
    SpectralField U1, U2;        // dT U, dT^2 U
    SpectralField V, VT, VTT;    // V = H(U) and T-derivatives
    SpectralField V2, V2T, V2TT; // corrector and T-derivatives
    SpectralField res_u_a, res_u_b, res_v_a;
};

namespace detail {

inline std::vector<double> dx_samples(const Grid1D& g, const std::vector<double>& s, int order) {
    auto f = transform_forward_real(g, s);
    return transform_inverse_real(derivative(f, order));
}

inline SpectralField to_field(const Grid1D& g, const std::vector<double>& s) {
    auto f = transform_forward_real(g, s);
    dealias(f);
    return f;
}

}  // namespace detail

inline SlowProfiles compute_slow_profiles(const WhithamState& st) {
    const Grid1D g = st.u.grid;
    const std::size_t n = g.n;
    auto u = transform_inverse_real(st.u);

    for (double v : u)
        if (!(1.0 + 2.0 * v > 1e-6)) throw std::domain_error("slow profiles: slaving gate 1+2u>0 violated");

    auto u1 = transform_inverse_real(derivative(st.w));
    std::vector<double> gu(n), g1(n), g2(n);
    for (std::size_t i = 0; i < n; ++i) {
        gu[i] = flux_g(u[i]);
        g1[i] = flux_g1(u[i]);
        g2[i] = flux_g2(u[i]);
    }
    auto u2 = detail::dx_samples(g, gu, 2);
    std::vector<double> tmp(n);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = g1[i] * u1[i];
    auto u3 = detail::dx_samples(g, tmp, 2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = g2[i] * u1[i] * u1[i] + g1[i] * u2[i];
    auto u4 = detail::dx_samples(g, tmp, 2);

    std::vector<double> v(n), vt(n), vtt(n), vt3(n), vt4(n);
    for (std::size_t i = 0; i < n; ++i) {
        double h1 = slaving_h1(u[i]), h2 = slaving_h2(u[i]);
        double h3 = slaving_h3(u[i]), h4 = slaving_h4(u[i]);
        double a = u1[i], b = u2[i], c = u3[i], d = u4[i];
        v[i] = slaving_h(u[i]);
        vt[i] = h1 * a;
        vtt[i] = h2 * a * a + h1 * b;
        vt3[i] = h3 * a * a * a + 3.0 * h2 * a * b + h1 * c;
        vt4[i] = h4 * a * a * a * a + 6.0 * h3 * a * a * b + h2 * (3.0 * b * b + 4.0 * a * c) + h1 * d;
    }

    // corrector V2 = N / D,  N = dX^2 V - dT^2 V,  D = 2 (1 + U + V)
    auto vxx = detail::dx_samples(g, v, 2);
    auto vtxx = detail::dx_samples(g, vt, 2);
    auto vttxx = detail::dx_samples(g, vtt, 2);
    std::vector<double> v2(n), v2t(n), v2tt(n), dD(n), ddD(n);
    for (std::size_t i = 0; i < n; ++i) {
        double D = 2.0 * (1.0 + u[i] + v[i]);
        if (!(D > 1e-6)) throw std::domain_error("slow profiles: corrector gate 1+u+v>0 violated");
        double N = vxx[i] - vtt[i];
        double Nt = vtxx[i] - vt3[i];
        double Ntt = vttxx[i] - vt4[i];
        double Dt = 2.0 * (u1[i] + vt[i]);
        double Dtt = 2.0 * (u2[i] + vtt[i]);
        v2[i] = N / D;
        v2t[i] = (Nt - v2[i] * Dt) / D;
        v2tt[i] = (Ntt - 2.0 * v2t[i] * Dt - v2[i] * Dtt) / D;
        dD[i] = Dt;
        ddD[i] = Dtt;
    }

    std::vector<double> ra(n), rb(n), rv(n);
    for (std::size_t i = 0; i < n; ++i) {
        ra[i] = u2[i] + 2.0 * (u[i] + v[i]) * v2[i];
        rb[i] = v2[i] * v2[i];
    }
    auto ra_xx = detail::dx_samples(g, ra, 2);
    auto rb_xx = detail::dx_samples(g, rb, 2);
    auto v2xx = detail::dx_samples(g, v2, 2);
    for (std::size_t i = 0; i < n; ++i) {
        ra_xx[i] = -ra_xx[i];
        rb_xx[i] = -rb_xx[i];
        rv[i] = v2tt[i] - v2xx[i] + v2[i] * v2[i];
    }

    SlowProfiles p;
    p.U = st.u;
    p.W = st.w;
    p.U1 = detail::to_field(g, u1);
    p.U2 = detail::to_field(g, u2);
    p.V = detail::to_field(g, v);
    p.VT = detail::to_field(g, vt);
    p.VTT = detail::to_field(g, vtt);
    p.V2 = detail::to_field(g, v2);
    p.V2T = detail::to_field(g, v2t);
    p.V2TT = detail::to_field(g, v2tt);
    p.res_u_a = detail::to_field(g, ra_xx);
    p.res_u_b = detail::to_field(g, rb_xx);
    p.res_v_a = detail::to_field(g, rv);
    return p;
}

// H^s norm in the unscaled variable x of the slow profile f(eps x):
// mode j of f carries fast wavenumber eps*K_j and the period is L/eps.
inline double fast_sobolev_norm_of_slow(const SpectralField& f, double eps, double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double k = eps * f.grid.k(i);
        acc += std::pow(1.0 + k * k, s) * std::norm(f.c[i]);
    }
    return std::sqrt(f.grid.length / eps * acc);
}

// As above but with the weight 1/omega1(k); the k = 0 mode must vanish.
inline double fast_weighted_norm_of_slow(const SpectralField& f, double eps, double s,
                                         double zero_mode_tol = 1e-9) {
    double scale = 0.0;
    for (auto& v : f.c) scale = std::max(scale, std::abs(v));
    if (std::abs(f.c[0]) > zero_mode_tol * std::max(scale, 1.0))
        throw std::domain_error("weighted norm: nonzero mean");
    double acc = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        if (i == f.grid.n / 2) continue;
        double k = eps * f.grid.k(i);
        double w = omega1(k);
        acc += std::pow(1.0 + k * k, s) * std::norm(f.c[i]) / (w * w);
    }
    return std::sqrt(f.grid.length / eps * acc);
}

struct ResidualReport {
    double res_u;           // ||res_u||_{H^s(dx)}
    double res_v;           // ||res_v||_{H^s(dx)}
    double res_u_weighted;  // ||omega1(k)^{-1} res_u||_{H^s(dx)}
};

inline ResidualReport residual_report(const WhithamState& st, double eps, double s) {
    SlowProfiles p = compute_slow_profiles(st);
    SpectralField ru = p.res_u_a + (eps * eps) * p.res_u_b;
    ResidualReport r;
    double e4 = std::pow(eps, 4);
    r.res_u = e4 * fast_sobolev_norm_of_slow(ru, eps, s);
    r.res_v = e4 * fast_sobolev_norm_of_slow(p.res_v_a, eps, s);
    r.res_u_weighted = e4 * fast_weighted_norm_of_slow(ru, eps, s);
    return r;
}

// Transplant a slow-grid field onto the fast grid covering one slow period:
// slow mode j becomes fast mode j (exact spectral evaluation of f(eps x)).
inline SpectralField slow_to_fast(const SpectralField& f, const Grid1D& fast, double eps) {
    if (std::abs(fast.length * eps - f.grid.length) > 1e-9 * f.grid.length)
        throw std::invalid_argument("slow_to_fast: fast grid does not cover one slow period");
    if (fast.n < f.grid.n) throw std::invalid_argument("slow_to_fast: fast grid too coarse");
    SpectralField out(fast);
    for (std::size_t i = 0; i < f.size(); ++i) {
        long j = f.grid.mode(i);
        if (std::labs(j) >= static_cast<long>(f.grid.n) / 2) continue;
        out.c[fast.index_of_mode(j)] = f.c[i];
    }
    return out;
}

// Approximation fields and their exact t-derivatives on the fast grid.
struct AnsatzFields {
    SpectralField psi_u, psi_v, psi_u_t, psi_v_t;
};

inline AnsatzFields build_ansatz(const WhithamState& st, double eps, const Grid1D& fast) {
    SlowProfiles p = compute_slow_profiles(st);
    const double e2 = eps * eps;
    AnsatzFields a;
    a.psi_u = slow_to_fast(p.U, fast, eps);
    a.psi_v = slow_to_fast(p.V + e2 * p.V2, fast, eps);
    a.psi_u_t = slow_to_fast(eps * p.U1, fast, eps);
    a.psi_v_t = slow_to_fast(eps * (p.VT + e2 * p.V2T), fast, eps);
    return a;
}

}  // namespace kgb

#endif
