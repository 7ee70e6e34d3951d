#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kgb/spectral.hpp"

using namespace kgb;

TEST_CASE("fft round trip is exact to machine precision") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Grid1D g(256, 2.0 * pi);
    std::vector<cplx> s(g.n);
    for (auto& v : s) v = cplx(dist(rng), dist(rng));
    auto back = fft_samples(fft_coeffs(s));
    double err = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) err = std::max(err, std::abs(back[i] - s[i]));
    REQUIRE(err < 1e-12);
}

TEST_CASE("forward transform recovers analytic coefficients") {
    Grid1D g(128, 2.0 * pi);
    auto f = sample_function(g, [](double x) { return 0.5 + std::cos(3.0 * x) - 2.0 * std::sin(5.0 * x); });
    REQUIRE(std::abs(f.c[g.index_of_mode(0)] - cplx(0.5)) < 1e-13);
    REQUIRE(std::abs(f.c[g.index_of_mode(3)] - cplx(0.5)) < 1e-13);
    REQUIRE(std::abs(f.c[g.index_of_mode(5)] - cplx(0.0, 1.0)) < 1e-13);
    REQUIRE(std::abs(f.c[g.index_of_mode(-5)] - cplx(0.0, -1.0)) < 1e-13);
    REQUIRE(std::abs(f.c[g.index_of_mode(2)]) < 1e-13);
}

TEST_CASE("derivative and antiderivative are inverse on zero-mean fields") {
    Grid1D g(128, 10.0);
    auto f = sample_function(g, [](double x) { return std::sin(2.0 * pi * x / 10.0); });
    auto d = derivative(f);
    auto f2 = antiderivative(d);
    double err = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) err = std::max(err, std::abs(f2.c[i] - f.c[i]));
    REQUIRE(err < 1e-13);
    auto ds = transform_inverse_real(d);
    double expected = 2.0 * pi / 10.0;  // cos at x=0
    REQUIRE(std::abs(ds[0] - expected) < 1e-12);
}

TEST_CASE("convolution matches pointwise product for band-limited fields") {
    Grid1D g(256, 2.0 * pi);
    auto f = sample_function(g, [](double x) { return std::cos(2.0 * x) + 0.3 * std::sin(7.0 * x); });
    auto h = sample_function(g, [](double x) { return 1.0 + 0.5 * std::cos(5.0 * x); });
    auto prod = convolve(f, h);
    auto direct = sample_function(g, [](double x) {
        return (std::cos(2.0 * x) + 0.3 * std::sin(7.0 * x)) * (1.0 + 0.5 * std::cos(5.0 * x));
    });
    double err = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) err = std::max(err, std::abs(prod.c[i] - direct.c[i]));
    REQUIRE(err < 1e-10);
}

TEST_CASE("norms follow Parseval and the Fourier weight") {
    Grid1D g(128, 2.0 * pi);
    auto f = sample_function(g, [](double x) { return std::cos(2.0 * x); });
    // ||cos(2x)||_{L2}^2 = pi
    REQUIRE(std::abs(l2_norm(f) - std::sqrt(pi)) < 1e-12);
    // single mode k0 = 2, s = 1: weighted/unweighted ratio is sqrt(1+k0^2) = sqrt 5
    double r = sobolev_norm_weighted(f, 1.0) / sobolev_norm_weighted(f, 0.0);
    REQUIRE(std::abs(r - std::sqrt(5.0)) < 1e-12);
    // derivative-form H^1: sqrt(1 + k0^2) * L2 as well for a single mode
    REQUIRE(std::abs(sobolev_norm(f, 1) - std::sqrt(5.0 * pi)) < 1e-12);
}

TEST_CASE("hermitian symmetry detection and enforcement") {
    Grid1D g(64, 2.0 * pi);
    auto f = sample_function(g, [](double x) { return std::sin(x) + 0.2 * std::cos(4.0 * x); });
    REQUIRE(hermitian_defect(f) < 1e-14);
    f.c[g.index_of_mode(3)] += cplx(0.0, 1e-3);
    REQUIRE(hermitian_defect(f) > 1e-4);
    enforce_hermitian(f);
    REQUIRE(hermitian_defect(f) < 1e-14);
}

TEST_CASE("upsampling is exact spectral interpolation") {
    Grid1D coarse(64, 2.0 * pi), fine(256, 2.0 * pi);
    auto f = sample_function(coarse, [](double x) { return std::cos(3.0 * x) - 0.4 * std::sin(9.0 * x); });
    auto up = upsample(f, fine);
    auto s = transform_inverse_real(up);
    double err = 0.0;
    for (std::size_t i = 0; i < fine.n; ++i) {
        double x = fine.x(i);
        err = std::max(err, std::abs(s[i] - (std::cos(3.0 * x) - 0.4 * std::sin(9.0 * x))));
    }
    REQUIRE(err < 1e-12);
}
