#include <catch2/catch_amalgamated.hpp>

#include <etalab/torus_spectrum.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace etalab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Independent enumeration: lambda_{m,n} = scale * 4 pi^2 |m tau - n|^2 / (Im tau)^2.
std::vector<double> brute_eigenvalues(tau_point<double> tau, normalization norm,
                                      std::size_t count) {
    const double pi = std::numbers::pi;
    const double scale = norm == normalization::unit_volume ? tau.im : 1.0;
    std::vector<double> all;
    for (int m = -30; m <= 30; ++m)
        for (int n = -30; n <= 30; ++n) {
            const double re = m * tau.re - n, im = m * tau.im;
            all.push_back(scale * 4.0 * pi * pi * (re * re + im * im) / (tau.im * tau.im));
        }
    std::sort(all.begin(), all.end());
    all.resize(count);
    return all;
}

}  // namespace

TEST_CASE("eigenvalues match brute force enumeration") {
    const tau_point<double> tau{0.3, 1.1};
    for (auto norm : {normalization::induced, normalization::unit_volume}) {
        const auto got = eigenvalues(tau, norm, 40);
        const auto want = brute_eigenvalues(tau, norm, 40);
        REQUIRE(got.size() == 40);
        for (std::size_t k = 0; k < 40; ++k)
            REQUIRE_THAT(got[k], WithinAbs(want[k], 1e-9 * (1.0 + want[k])));
    }
}

TEST_CASE("unit volume rescales the induced spectrum by the area") {
    const tau_point<double> tau{-0.2, 1.7};
    const auto ind = eigenvalues(tau, normalization::induced, 25);
    const auto uv = eigenvalues(tau, normalization::unit_volume, 25);
    for (std::size_t k = 0; k < 25; ++k)
        REQUIRE_THAT(uv[k], WithinAbs(tau.im * ind[k], 1e-9 * (1.0 + uv[k])));
}

TEST_CASE("square torus spectrum starts at 0 and 4 pi^2") {
    const auto ev = eigenvalues(tau_point<double>{0.0, 1.0}, normalization::induced, 6);
    const double pi = std::numbers::pi;
    REQUIRE(ev[0] == 0.0);
    // first positive eigenvalue has multiplicity 4: (m,n) in {(0,+-1),(+-1,0)}
    for (int k = 1; k <= 4; ++k) REQUIRE_THAT(ev[k], WithinRel(4.0 * pi * pi, 1e-12));
    REQUIRE_THAT(ev[5], WithinRel(8.0 * pi * pi, 1e-12));
}

TEST_CASE("heat trace branches agree in the crossover window") {
    const double pi = std::numbers::pi;
    for (auto norm : {normalization::induced, normalization::unit_volume}) {
        for (auto tau : {tau_point<double>{0.0, 1.0}, {0.5, 1.5}, {-0.35, 0.8}}) {
            const double area = norm == normalization::unit_volume ? 1.0 : tau.im;
            const double tstar = area / (4.0 * pi);
            for (double f : {0.5, 1.0, 2.0}) {
                const double d = heat_trace_direct(tau, norm, f * tstar, 1e-13);
                const double p = heat_trace_poisson(tau, norm, f * tstar, 1e-13);
                const double a = heat_trace(tau, norm, f * tstar, 1e-13);
                REQUIRE_THAT(d, WithinRel(p, 1e-10));
                REQUIRE((a == d || a == p));
            }
        }
    }
}

TEST_CASE("heat trace limits") {
    const tau_point<double> tau{0.0, 1.0};
    // t -> infinity: only the zero mode survives
    REQUIRE_THAT(heat_trace(tau, normalization::induced, 50.0, 1e-13), WithinAbs(1.0, 1e-13));
    // t -> 0: leading Weyl term area / (4 pi t)
    const double t = 1e-5;
    const double lead = 1.0 / (4.0 * std::numbers::pi * t);
    REQUIRE_THAT(heat_trace(tau, normalization::induced, t, 1e-13), WithinRel(lead, 1e-8));
}

TEST_CASE("synthetic spectrum trace evaluates partial sums") {
    const auto tr = make_spectrum_trace<double>({0.0, 1.0, 4.0});
    const auto [theta, bound] = tr.evaluate(0.7, 1e-14);
    REQUIRE_THAT(theta, WithinRel(1.0 + std::exp(-0.7) + std::exp(-2.8), 1e-14));
    REQUIRE(bound >= 0.0);
}

TEST_CASE("torus trace function matches heat_trace") {
    const tau_point<double> tau{0.25, 1.3};
    const auto tr = make_torus_trace(tau, normalization::induced);
    for (double t : {0.05, 0.2, 1.0}) {
        const auto [theta, bound] = tr.evaluate(t, 1e-12);
        REQUIRE_THAT(theta, WithinRel(heat_trace(tau, normalization::induced, t, 1e-12), 1e-11));
        REQUIRE(bound <= 1e-11 * (1.0 + theta));
    }
}

TEST_CASE("heat trace argument validation") {
    const tau_point<double> tau{0.0, 1.0};
    REQUIRE_THROWS_AS(heat_trace(tau, normalization::induced, 0.0, 1e-12),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(heat_trace(tau, normalization::induced, -1.0, 1e-12),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(heat_trace(tau, normalization::induced, 1.0, -1e-12),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(eigenvalues(tau, normalization::induced, 0), std::invalid_argument);
}

TEST_CASE("direct branch refuses demands past the term cap") {
    REQUIRE_THROWS_AS(heat_trace_direct(tau_point<double>{0.0, 1.0}, normalization::induced, 1e-7),
                      convergence_failure);
}

TEST_CASE("tau point validation") {
    REQUIRE_THROWS_AS(tau_point<double>(0.0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(tau_point<double>(0.0, -1.0), std::invalid_argument);
}
