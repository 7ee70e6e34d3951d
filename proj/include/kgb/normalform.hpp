#ifndef KGB_NORMALFORM_HPP
#define KGB_NORMALFORM_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "kgb/dispersion.hpp"
#include "kgb/kernel.hpp"
#include "kgb/kgb_system.hpp"
#include "kgb/spectral.hpp"

namespace kgb {

// Row bookkeeping for the diagonal error system.  Rows are indexed
// 0:+1, 1:-1, 2:+2, 3:-2; rows 0,1 are the long-wave family, rows 2,3 the
// massive family.  Row i evolves as
//   dt R_i = i Om_i(k) R_i
//          + i sg_i w_i(k) int f_{i,res}(k,k-m) (R_{+a} + R_{-a})(m) dm
//          + i sg_i w_i(k) int f_{i,non}(k,k-m) (R_{+b} + R_{-b})(m) dm
//          + eps p_i,
// where a is the own family, b the other, Om_i = sg_i * omega_{|i|},
// w = omega1 on the long-wave rows and omega2^{-1} on the massive rows.
inline constexpr int NF_ROWS = 4;

inline double nf_sigma(int i) { return (i == 0 || i == 2) ? 1.0 : -1.0; }
inline bool nf_long_family(int i) { return i < 2; }
inline int nf_partner(int i) { return i ^ 1; }  // sign flip within the family

inline double nf_omega(int i, double k) {
    double w = nf_long_family(i) ? omega1(k) : omega2(k);
    return nf_sigma(i) * w;
}
inline double nf_weight(int i, double k) {
    return nf_long_family(i) ? omega1(k) : 1.0 / omega2(k);
}

// 4x4 matrix of kernels with an implicit identity: x -> x + K x.
struct KernelMatrix {
    std::array<std::array<Kernel2, NF_ROWS>, NF_ROWS> b;
    std::array<std::array<bool, NF_ROWS>, NF_ROWS> set{};

    void put(int i, int l, Kernel2 k) {
        b[i][l] = std::move(k);
        set[i][l] = true;
    }
};

inline std::array<SpectralField, NF_ROWS> to_rows(const DiagonalState& d) {
    return {d.r1p, d.r1m, d.r2p, d.r2m};
}
inline DiagonalState from_rows(const std::array<SpectralField, NF_ROWS>& r) {
    return DiagonalState{r[0], r[1], r[2], r[3]};
}

// Apply (I + K) to a diagonal state.
inline DiagonalState matrix_apply(const KernelMatrix& K, const DiagonalState& d) {
    auto rin = to_rows(d);
    auto rout = rin;
    for (int i = 0; i < NF_ROWS; ++i)
        for (int l = 0; l < NF_ROWS; ++l)
            if (K.set[i][l]) rout[i] = rout[i] + kernel_apply(K.b[i][l], rin[l]);
    return from_rows(rout);
}

// K3 = A + B + A o B  (so that I + K3 = (I + A)(I + B)).
inline KernelMatrix matrix_combine(const KernelMatrix& A, const KernelMatrix& B, double trim_tol) {
    KernelMatrix C;
    for (int i = 0; i < NF_ROWS; ++i) {
        for (int l = 0; l < NF_ROWS; ++l) {
            std::vector<Kernel2> parts;
            if (A.set[i][l]) parts.push_back(A.b[i][l]);
            if (B.set[i][l]) parts.push_back(B.b[i][l]);
            for (int v = 0; v < NF_ROWS; ++v)
                if (A.set[i][v] && B.set[v][l]) parts.push_back(kernel_compose(A.b[i][v], B.b[v][l]));
            if (parts.empty()) continue;
            std::vector<const Kernel2*> ptrs;
            for (auto& p : parts) ptrs.push_back(&p);
            C.put(i, l, kernel_trim(kernel_sum(ptrs), trim_tol));
        }
    }
    return C;
}

inline double matrix_max_xnorm(const KernelMatrix& K, double eps, double s) {
    double q = 0.0;
    for (int i = 0; i < NF_ROWS; ++i)
        for (int l = 0; l < NF_ROWS; ++l)
            if (K.set[i][l]) q = std::max(q, kernel_xnorm(K.b[i][l], eps, s));
    return q;
}

// One stage of the iteration: the coupling kernels of the current error
// equations plus the change of variables removing the cross-family block.
struct NFStage {
    int stage = 0;
    std::array<Kernel2, NF_ROWS> f_res, f_non;
    KernelMatrix g;       // cross-family blocks only
    KernelMatrix h;       // inverse perturbation, all blocks
    double neumann_tail = 0.0;  // bound on the truncated Neumann remainder
};

struct NFOptions {
    double eps = 0.1;
    double s = 1.0;
    double trim_tol = 1e-13;
    double neumann_tol = 1e-12;
};

// g_{il}(k, .) = sg_i w_i(k) / (Om_i(k) - Om_l(k)) * f_{i,non}(k, .),
// cancelling the cross-family coupling up to the O(eps) frequency-shift
// remainder; the same-k denominator keeps |Om_i - Om_l| >= sqrt(2)-1.
inline void nf_compute_g(NFStage& st) {
    for (int i = 0; i < NF_ROWS; ++i) {
        for (int l = 0; l < NF_ROWS; ++l) {
            if (nf_long_family(i) == nf_long_family(l)) continue;
            Kernel2 gil = kernel_scale_rows(st.f_non[i], [i, l](double k) {
                return cplx(nf_sigma(i) * nf_weight(i, k) / (nf_omega(i, k) - nf_omega(l, k)));
            });
            st.g.put(i, l, std::move(gil));
        }
    }
}

// Neumann series h = sum_{lam>=1} (-T)^lam for (I + T)^{-1} = I + h, with T
// the block matrix of the g kernels.  Terminates when the operator-norm
// bound of the tail, q^{lam+1}/(1-q), drops below neumann_tol.
inline void nf_compute_h(NFStage& st, const NFOptions& opt) {
    double q = matrix_max_xnorm(st.g, opt.eps, opt.s);
    // the blockwise operator norm of T is bounded by twice the largest
    // block norm (two nonzero blocks per row)
    double qT = 2.0 * q;
    if (qT >= 0.9) throw std::domain_error("nf_compute_h: Neumann series not contractive");
    KernelMatrix minusT;
    for (int i = 0; i < NF_ROWS; ++i)
        for (int l = 0; l < NF_ROWS; ++l)
            if (st.g.set[i][l]) minusT.put(i, l, kernel_scaled(st.g.b[i][l], cplx(-1.0)));
    KernelMatrix H = minusT;       // lam = 1
    KernelMatrix P = minusT;       // current power
    double tail = qT * qT / (1.0 - qT);
    int lam = 1;
    while (tail > opt.neumann_tol) {
        // P <- (-T) o P, H <- H + P
        KernelMatrix Pn;
        for (int i = 0; i < NF_ROWS; ++i) {
            for (int l = 0; l < NF_ROWS; ++l) {
                std::vector<Kernel2> parts;
                for (int v = 0; v < NF_ROWS; ++v)
                    if (minusT.set[i][v] && P.set[v][l])
                        parts.push_back(kernel_compose(minusT.b[i][v], P.b[v][l]));
                if (parts.empty()) continue;
                std::vector<const Kernel2*> ptrs;
                for (auto& p : parts) ptrs.push_back(&p);
                Pn.put(i, l, kernel_trim(kernel_sum(ptrs), opt.trim_tol));
            }
        }
        P = std::move(Pn);
        for (int i = 0; i < NF_ROWS; ++i)
            for (int l = 0; l < NF_ROWS; ++l)
                if (P.set[i][l]) {
                    if (H.set[i][l]) {
                        Kernel2 wide(H.b[i][l].grid, std::max(H.b[i][l].omax, P.b[i][l].omax));
                        kernel_axpy(wide, cplx(1.0), H.b[i][l]);
                        kernel_axpy(wide, cplx(1.0), P.b[i][l]);
                        H.put(i, l, kernel_trim(wide, opt.trim_tol));
                    } else {
                        H.put(i, l, P.b[i][l]);
                    }
                }
        ++lam;
        tail = std::pow(qT, lam + 1) / (1.0 - qT);
        if (lam > 200) throw std::runtime_error("nf_compute_h: Neumann series too slow");
    }
    st.h = std::move(H);
    st.neumann_tail = tail;
}

// Stage 1: every row couples through the modulation profile itself,
//   f_res = f_non = Psi_hat(l), constant in k.
inline NFStage nf_init_stage(const SpectralField& psi, const NFOptions& opt, double support_tol = 1e-14) {
    NFStage st;
    st.stage = 1;
    Kernel2 base = Kernel2::from_field(psi, support_tol);
    for (int i = 0; i < NF_ROWS; ++i) {
        st.f_res[i] = base;
        st.f_non[i] = base;
    }
    nf_compute_g(st);
    nf_compute_h(st, opt);
    return st;
}

// One step of the recursion.  With gt_{il} = f_{i,non}/(Om_i - Om_l) and
// stage-j kernels throughout:
//   Q_own = f_{i,res} + sum_{l in other} gt_{il} o (sg_l w_l(.) f_{l,non}),
//   Q_oth =            sum_{l in other} gt_{il} o (sg_l w_l(.) f_{l,res}),
// the coupling of row i to row mu after substituting the inverse transform is
//   c_mu = [mu own] Q_own + [mu other] Q_oth
//        + sum_{nu own} Q_own o h_{nu,mu} + sum_{nu other} Q_oth o h_{nu,mu},
// and the new kernels are the family averages
//   f_res' = (c_{+a} + c_{-a})/2,   f_non' = (c_{+b} + c_{-b})/2;
// the discarded antisymmetric part is of higher order and is absorbed in
// the eps p_i remainder.
inline NFStage nf_advance(const NFStage& prev, const NFOptions& opt) {
    NFStage st;
    st.stage = prev.stage + 1;
    for (int i = 0; i < NF_ROWS; ++i) {
        const int own0 = nf_long_family(i) ? 0 : 2;
        const int oth0 = nf_long_family(i) ? 2 : 0;
        Kernel2 q_own = prev.f_res[i];
        Kernel2 q_oth;
        bool q_oth_set = false;
        for (int l = oth0; l < oth0 + 2; ++l) {
            Kernel2 gt = kernel_scale_rows(prev.f_non[i], [i, l](double k) {
                return cplx(1.0 / (nf_omega(i, k) - nf_omega(l, k)));
            });
            Kernel2 wn = kernel_scale_rows(prev.f_non[l], [l](double k) {
                return cplx(nf_sigma(l) * nf_weight(l, k));
            });
            Kernel2 wr = kernel_scale_rows(prev.f_res[l], [l](double k) {
                return cplx(nf_sigma(l) * nf_weight(l, k));
            });
            Kernel2 pn = kernel_compose(gt, wn, opt.trim_tol);
            Kernel2 pr = kernel_compose(gt, wr, opt.trim_tol);
            {
                Kernel2 wide(q_own.grid, std::max(q_own.omax, pn.omax));
                kernel_axpy(wide, cplx(1.0), q_own);
                kernel_axpy(wide, cplx(1.0), pn);
                q_own = kernel_trim(wide, opt.trim_tol);
            }
            if (!q_oth_set) {
                q_oth = pr;
                q_oth_set = true;
            } else {
                Kernel2 wide(q_oth.grid, std::max(q_oth.omax, pr.omax));
                kernel_axpy(wide, cplx(1.0), q_oth);
                kernel_axpy(wide, cplx(1.0), pr);
                q_oth = kernel_trim(wide, opt.trim_tol);
            }
        }
        std::array<Kernel2, NF_ROWS> c;
        for (int mu = 0; mu < NF_ROWS; ++mu) {
            bool mu_own = nf_long_family(mu) == nf_long_family(i);
            std::vector<Kernel2> parts;
            parts.push_back(mu_own ? q_own : q_oth);
            for (int nu = 0; nu < NF_ROWS; ++nu) {
                if (!prev.h.set[nu][mu]) continue;
                bool nu_own = nf_long_family(nu) == nf_long_family(i);
                parts.push_back(kernel_compose(nu_own ? q_own : q_oth, prev.h.b[nu][mu], opt.trim_tol));
            }
            std::vector<const Kernel2*> ptrs;
            for (auto& p : parts) ptrs.push_back(&p);
            c[mu] = kernel_trim(kernel_sum(ptrs), opt.trim_tol);
        }
        {
            Kernel2 wide(c[own0].grid, std::max(c[own0].omax, c[own0 + 1].omax));
            kernel_axpy(wide, cplx(0.5), c[own0]);
            kernel_axpy(wide, cplx(0.5), c[own0 + 1]);
            st.f_res[i] = kernel_trim(wide, opt.trim_tol);
        }
        {
            Kernel2 wide(c[oth0].grid, std::max(c[oth0].omax, c[oth0 + 1].omax));
            kernel_axpy(wide, cplx(0.5), c[oth0]);
            kernel_axpy(wide, cplx(0.5), c[oth0 + 1]);
            st.f_non[i] = kernel_trim(wide, opt.trim_tol);
        }
    }
    nf_compute_g(st);
    nf_compute_h(st, opt);
    return st;
}

struct NFHistory {
    std::vector<double> f_non_xnorm;   // per stage, largest row norm
    std::vector<double> f_res_xnorm;
    std::vector<double> pairing_defect;  // max_i || f_{-i} - reflconj(f_i) ||
    std::vector<double> neumann_tail;
};

struct NFResult {
    NFStage final_stage;       // holds the limit f_res (and last f_non)
    KernelMatrix transform;    // composite I + K over all stages
    KernelMatrix inverse;      // composite inverse
    NFHistory history;
    int stages = 0;
};

inline double nf_max_fnon_xnorm(const NFStage& st, const NFOptions& opt) {
    double m = 0.0;
    for (int i = 0; i < NF_ROWS; ++i) m = std::max(m, kernel_xnorm(st.f_non[i], opt.eps, opt.s));
    return m;
}

inline double nf_pairing_defect(const NFStage& st) {
    double d = 0.0;
    for (int i = 0; i < NF_ROWS; i += 2) {
        d = std::max(d, kernel_diff_max(st.f_res[nf_partner(i)], kernel_reflconj(st.f_res[i])));
        d = std::max(d, kernel_diff_max(st.f_non[nf_partner(i)], kernel_reflconj(st.f_non[i])));
    }
    return d;
}

// Run stages until the non-resonant coupling drops below tol (in the
// weighted kernel norm) or max_stages is reached.  The composite transform
// maps original diagonal errors to the final variables.
inline NFResult nf_iterate(const SpectralField& psi, const NFOptions& opt, double tol = 1e-7,
                           int max_stages = 40) {
    NFResult res;
    NFStage st = nf_init_stage(psi, opt);
    KernelMatrix composite = st.g;
    KernelMatrix inverse = st.h;
    auto record = [&](const NFStage& s) {
        res.history.f_non_xnorm.push_back(nf_max_fnon_xnorm(s, opt));
        double fr = 0.0;
        for (int i = 0; i < NF_ROWS; ++i) fr = std::max(fr, kernel_xnorm(s.f_res[i], opt.eps, opt.s));
        res.history.f_res_xnorm.push_back(fr);
        res.history.pairing_defect.push_back(nf_pairing_defect(s));
        res.history.neumann_tail.push_back(s.neumann_tail);
    };
    record(st);
    int j = 1;
    while (res.history.f_non_xnorm.back() > tol && j < max_stages) {
        st = nf_advance(st, opt);
        ++j;
        record(st);
        composite = matrix_combine(st.g, composite, opt.trim_tol);
        inverse = matrix_combine(inverse, st.h, opt.trim_tol);
    }
    res.final_stage = std::move(st);
    res.transform = std::move(composite);
    res.inverse = std::move(inverse);
    res.stages = j;
    return res;
}

// Lipschitz-in-k defect dk * sum_l sup_k |f(k,l) - f(k-l,l)|; O(eps) for
// kernels built from slowly modulated profiles.  The sup runs over the
// dealiased band only: fields are identically zero beyond |mode| = n/3, and
// rows within omax of the grid edge carry truncation artifacts of the
// no-wraparound composition that have no continuum counterpart.
inline double kernel_shift_defect(const Kernel2& f) {
    const long band = static_cast<long>(f.grid.n) / 3;
    double acc = 0.0;
    for (long o = -f.omax; o <= f.omax; ++o) {
        double colmax = 0.0;
        for (long j = -band; j <= band; ++j) {
            if (j - o < -band || j - o > band) continue;
            colmax = std::max(colmax, std::abs(f.value(j, o) - f.value(j - o, o)));
        }
        acc += colmax;
    }
    return f.grid.dk() * acc;
}

}  // namespace kgb

#endif
