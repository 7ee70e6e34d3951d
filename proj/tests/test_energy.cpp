#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kgb/energy.hpp"
#include "kgb/harness.hpp"
#include "kgb/normalform.hpp"

using namespace kgb;

namespace {

KGBState hermitian_state(const Grid1D& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto mk = [&](bool anti) {
        SpectralField f(g);
        for (long j = 1; j <= 30; ++j) {
            cplx v(dist(rng), dist(rng));
            f.c[g.index_of_mode(j)] = v;
            f.c[g.index_of_mode(-j)] = anti ? -std::conj(v) : std::conj(v);
        }
        return f;
    };
    KGBState s;
    s.u = mk(false);
    s.wu = mk(false);
    s.v = mk(false);
    s.wv = mk(true);
    return s;
}

}  // namespace

TEST_CASE("quadratic energy reproduces a hand-computed single mode") {
    Grid1D g(64, 2.0 * pi);
    KGBState s;
    s.u = SpectralField(g);
    s.wu = SpectralField(g);
    s.v = SpectralField(g);
    s.wv = SpectralField(g);
    s.u.c[g.index_of_mode(2)] = cplx(0.5);
    s.u.c[g.index_of_mode(-2)] = cplx(0.5);
    s.v.c[g.index_of_mode(1)] = cplx(0.0, 0.25);
    s.v.c[g.index_of_mode(-1)] = cplx(0.0, -0.25);
    // s = 1: u part weight (1 + k^2) at k = +-2, v part weight omega2^2 = k^2+2
    double expect = (2.0 * 0.25 * (1.0 + 4.0) + 2.0 * 0.0625 * 3.0) / g.dk();
    REQUIRE(std::abs(energy_quadratic(s, 1) - expect) < 1e-13);
}

TEST_CASE("hermitized cross term is exactly real, raw one is not") {
    RunConfig cfg;
    double eps = 0.1;
    Grid1D fast = fast_grid(cfg, eps);
    SpectralField psi = modulation_profile(whitham_initial(cfg), eps, fast);
    NFOptions opt{eps, 1.0, 1e-13, 1e-12};
    NFResult nf = nf_iterate(psi, opt, 1e-7);
    Kernel2 fu = kernel_scaled(nf.final_stage.f_res[0], cplx(2.0));
    KGBState s = hermitian_state(fast, 31);
    cplx herm = energy_cross_family(s.u, fu, 1, true);
    cplx raw = energy_cross_family(s.u, fu, 1, false);
    double scale = std::abs(herm);
    REQUIRE(std::abs(herm.imag()) < 1e-12 * scale);
    REQUIRE(std::abs(herm - raw) < 0.05 * scale);  // O(eps) apart
    EnergyReport rep = energy_modified(s, fu, fu, 1);
    REQUIRE(rep.imag_defect < 1e-10 * std::abs(rep.total));
}

TEST_CASE("cross term is a small perturbation controlled by the kernel norm") {
    RunConfig cfg;
    double eps = 0.1;
    Grid1D fast = fast_grid(cfg, eps);
    SpectralField psi = modulation_profile(whitham_initial(cfg), eps, fast);
    Kernel2 fu = kernel_scaled(Kernel2::from_field(psi, 1e-14), cplx(2.0));
    KGBState s = hermitian_state(fast, 37);
    EnergyReport rep = energy_modified(s, fu, fu, 1);
    double q = kernel_xnorm(fu, eps, 1.0);
    REQUIRE(std::abs(rep.cross_u) + std::abs(rep.cross_v) <= 2.0 * q * rep.quadratic);
    REQUIRE(rep.total > 0.0);
}

TEST_CASE("modified energy of the scaled initial error is order one or below") {
    RunConfig cfg;
    double eps = 0.1;
    Grid1D fast = fast_grid(cfg, eps);
    WhithamState wh = whitham_initial(cfg);
    KGBState err = state_difference(theorem_initial_data(cfg, eps, fast),
                                    ansatz_state(wh, eps, fast), std::pow(eps, -1.5));
    // initial data differ from the ansatz only through the eps^2 corrector,
    // so the scaled error is already small at t = 0
    REQUIRE(energy_quadratic(err, cfg.s) < 1.0);
}
