#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "kgb/harness.hpp"

using namespace kgb;

TEST_CASE("slope fit recovers an exact power law") {
    std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> val;
    for (double e : eps) val.push_back(3.7 * std::pow(e, 1.5));
    FitResult f = fit_slope(eps, val);
    REQUIRE(std::abs(f.slope - 1.5) < 1e-12);
    REQUIRE(std::abs(std::exp(f.intercept) - 3.7) < 1e-10);
    REQUIRE(f.r2 > 1.0 - 1e-12);
}

TEST_CASE("initial profiles have zero mean and the configured amplitude") {
    RunConfig cfg;
    SpectralField p1 = initial_phi1(cfg);
    SpectralField p2 = initial_phi2(cfg);
    REQUIRE(std::abs(p1.c[0]) < 1e-15);
    REQUIRE(std::abs(p2.c[0]) < 1e-15);
    REQUIRE(sup_norm(p1) < cfg.amp * 1.01);
    REQUIRE(sup_norm(p1) > cfg.amp * 0.5);
    // W is the primitive of phi2: dX W = phi2
    WhithamState st = whitham_initial(cfg);
    REQUIRE(l2_norm(derivative(st.w) - p2) < 1e-13);
}

TEST_CASE("theorem initial data sits on the slaving manifold") {
    RunConfig cfg;
    double eps = 0.1;
    Grid1D fast = fast_grid(cfg, eps);
    KGBState s = theorem_initial_data(cfg, eps, fast);
    auto u = transform_inverse_real(s.u);
    auto v = transform_inverse_real(s.v);
    double err = 0.0;
    for (std::size_t i = 0; i < fast.n; i += 13)
        err = std::max(err, std::abs(v[i] - slaving_h(u[i])));
    REQUIRE(err < 1e-10);
    REQUIRE(kgb_hermitian_defect(s) < 1e-12);
}

TEST_CASE("approximation error is small and eps-decreasing (smoke)") {
    RunConfig cfg;
    cfg.n_snapshots = 2;
    double e1 = max_approximation_error(cfg, 0.1);
    double e2 = max_approximation_error(cfg, 0.05);
    REQUIRE(e1 < 0.05);
    REQUIRE(e2 < e1);
    double slope = std::log2(e1 / e2);
    REQUIRE(slope > 1.0);
}
