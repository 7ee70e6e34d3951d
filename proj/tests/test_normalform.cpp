#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kgb/harness.hpp"
#include "kgb/normalform.hpp"

using namespace kgb;

namespace {

struct Setup {
    RunConfig cfg;
    double eps;
    Grid1D fast;
    SpectralField psi;
    NFOptions opt;

    explicit Setup(double e) : eps(e), fast(fast_grid(cfg, e)),
                               psi(modulation_profile(whitham_initial(cfg), e, fast)) {
        opt.eps = eps;
        opt.s = cfg.s;
        opt.trim_tol = cfg.trim_tol;
        opt.neumann_tol = cfg.neumann_tol;
    }
};

DiagonalState random_probe(const Grid1D& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto mk = [&]() {
        SpectralField f(g);
        for (long j = -40; j <= 40; ++j) {
            std::size_t i = g.index_of_mode(j);
            if (i < g.n && i != g.n / 2) f.c[i] = cplx(dist(rng), dist(rng));
        }
        return f;
    };
    return DiagonalState{mk(), mk(), mk(), mk()};
}

double state_h0s_norm(const DiagonalState& d, double s) {
    return sobolev_norm_weighted(d.r1p, s) + sobolev_norm_weighted(d.r1m, s) +
           sobolev_norm_weighted(d.r2p, s) + sobolev_norm_weighted(d.r2m, s);
}

DiagonalState state_diff(const DiagonalState& a, const DiagonalState& b) {
    return DiagonalState{a.r1p - b.r1p, a.r1m - b.r1m, a.r2p - b.r2p, a.r2m - b.r2m};
}

}  // namespace

TEST_CASE("stage one matches the modulation profile and its symmetries") {
    Setup s(0.1);
    NFStage st = nf_init_stage(s.psi, s.opt);
    // constant rows equal to Psi_hat(l) = c_l / dk
    Kernel2& f = st.f_res[0];
    double dk = s.fast.dk();
    for (long o = -f.omax; o <= f.omax; ++o) {
        cplx expect = s.psi.c[s.fast.index_of_mode(o)] / dk;
        REQUIRE(std::abs(f.value(0, o) - expect) < 1e-14 * std::abs(expect) + 1e-16);
        REQUIRE(std::abs(f.value(17, o) - f.value(-9, o)) == 0.0);
    }
    REQUIRE(nf_pairing_defect(st) < 1e-14);
    // offset conjugation symmetry f(k,l) = conj(f(k,-l)) for real profiles
    REQUIRE(kernel_conjl_defect(st.f_res[0]) < 1e-14);
}

TEST_CASE("homological choice cancels the frequency mismatch rowwise") {
    Setup s(0.1);
    NFStage st = nf_init_stage(s.psi, s.opt);
    // check g against its defining relation on a few rows/blocks:
    // (Om_i - Om_l) g_il = sg_i w_i f_non
    for (int i : {0, 1, 2, 3}) {
        for (int l = 0; l < NF_ROWS; ++l) {
            if (!st.g.set[i][l]) continue;
            for (long j : {-50L, 3L, 40L}) {
                double k = j * s.fast.dk();
                cplx lhs = (nf_omega(i, k) - nf_omega(l, k)) * st.g.b[i][l].value(j, 2);
                cplx rhs = nf_sigma(i) * nf_weight(i, k) * st.f_non[i].value(j, 2);
                REQUIRE(std::abs(lhs - rhs) < 1e-14);
            }
        }
    }
    // denominators stay away from zero: |Om_i - Om_l| >= sqrt(2) - 1
    for (double k = -60.0; k <= 60.0; k += 0.37) {
        for (int i : {0, 1})
            for (int l : {2, 3})
                REQUIRE(std::abs(nf_omega(i, k) - nf_omega(l, k)) >= std::sqrt(2.0) - 1.0 - 1e-12);
    }
}

TEST_CASE("transform inversion round trips on random probes") {
    Setup s(0.1);
    NFResult nf = nf_iterate(s.psi, s.opt, 1e-7);
    REQUIRE(nf.history.neumann_tail.back() < 1e-12);
    for (unsigned seed = 1; seed <= 20; ++seed) {
        DiagonalState x = random_probe(s.fast, seed);
        DiagonalState y = matrix_apply(nf.inverse, matrix_apply(nf.transform, x));
        double defect = state_h0s_norm(state_diff(y, x), s.opt.s) / state_h0s_norm(x, s.opt.s);
        REQUIRE(defect < 1e-9);
    }
}

TEST_CASE("stage iteration contracts at a stage-independent rate") {
    Setup s(0.05);
    NFResult nf = nf_iterate(s.psi, s.opt, 1e-9, 12);
    auto& hist = nf.history.f_non_xnorm;
    REQUIRE(hist.size() >= 4);
    std::vector<double> ratios;
    for (std::size_t i = 1; i < hist.size(); ++i) {
        if (hist[i] < 1e-13) break;  // below trim floor, ratios meaningless
        ratios.push_back(hist[i] / hist[i - 1]);
    }
    REQUIRE(ratios.size() >= 3);
    double rmin = 1e9, rmax = 0.0;
    for (double r : ratios) {
        REQUIRE(r < 0.6);
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    REQUIRE(rmax / rmin < 2.0);
}

TEST_CASE("stage update is quadratic in the profile amplitude") {
    Setup s(0.1);
    SpectralField psi_half = 0.5 * s.psi;
    NFStage a1 = nf_init_stage(s.psi, s.opt);
    NFStage a2 = nf_advance(a1, s.opt);
    NFStage b1 = nf_init_stage(psi_half, s.opt);
    NFStage b2 = nf_advance(b1, s.opt);
    double na = nf_max_fnon_xnorm(a2, s.opt);
    double nb = nf_max_fnon_xnorm(b2, s.opt);
    // f_non^{(2)} is quadratic in f^{(1)}: halving psi divides it by ~4
    double ratio = na / nb;
    REQUIRE(ratio > 3.5);
    REQUIRE(ratio < 4.5);
}

TEST_CASE("pairing persists exactly; row defects stay controlled") {
    // The reflection pairing is preserved to machine precision by every
    // stage.  The row-shift defect is exact at stage one, picked up at
    // O(eps) by the corrections, and must scale down linearly along the
    // ladder.  The offset-conjugation symmetry is exact at stage one but
    // only approximately preserved by the recursion (the symmetrized family
    // average restores pairing, not conjugation), so it is required to stay
    // small relative to the kernel scale rather than to shrink with eps.
    std::vector<double> shift;
    std::vector<double> ladder{0.1, 0.05, 0.025};
    for (double eps : ladder) {
        Setup s(eps);
        NFResult nf = nf_iterate(s.psi, s.opt, 1e-8);
        for (double d : nf.history.pairing_defect) REQUIRE(d < 1e-10);
        shift.push_back(kernel_shift_defect(nf.final_stage.f_res[0]));
        double rel = kernel_conjl_defect(nf.final_stage.f_res[0]) /
                     kernel_max_abs(nf.final_stage.f_res[0]);
        REQUIRE(rel < 1e-2);
    }
    REQUIRE(fit_slope(ladder, shift).slope >= 0.8);
}
