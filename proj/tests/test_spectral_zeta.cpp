#include <catch2/catch_amalgamated.hpp>

#include <etalab/modular_forms.hpp>
#include <etalab/spectral_zeta.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace etalab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using cplx = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

zeta_result<double> mellin_torus(tau_point<double> tau, normalization norm, double tol = 1e-10) {
    return mellin_b_coefficients(make_torus_trace(tau, norm), torus_expansion(tau, norm), 1, tol);
}

}  // namespace

TEST_CASE("epstein zeta special values at the square torus") {
    const tau_point<double> i{0.0, 1.0};
    const auto norm = normalization::induced;
    REQUIRE_THAT(epstein_zeta(i, norm, cplx(0.0, 0.0)).real(), WithinAbs(-1.0, 1e-13));
    REQUIRE_THAT(epstein_zeta(i, norm, cplx(2.0, 0.0)).real(),
                 WithinRel(0.0038669465907372100, 1e-11));
    REQUIRE_THAT(epstein_zeta(i, norm, cplx(3.0, 0.0)).real(),
                 WithinRel(7.5719100786946873e-5, 1e-11));
    const cplx z = epstein_zeta(i, norm, cplx(0.5, 0.5));
    REQUIRE_THAT(z.real(), WithinRel(-0.41723103660436933, 1e-11));
    REQUIRE_THAT(z.imag(), WithinRel(0.23600883068295442, 1e-11));
}

TEST_CASE("epstein zeta matches a direct eigenvalue sum") {
    const tau_point<double> tau{0.4, 1.3};
    const double s = 2.5;
    const auto ev = eigenvalues(tau, normalization::induced, 30000);
    double direct = 0.0;
    for (std::size_t k = ev.size(); k-- > 1;) direct += std::pow(ev[k], -s);
    const double got = epstein_zeta(tau, normalization::induced, cplx(s, 0.0)).real();
    REQUIRE_THAT(got, WithinRel(direct, 1e-5));
    REQUIRE(got > direct);  // dropped tail is positive
}

TEST_CASE("epstein zeta domain guards") {
    const tau_point<double> i{0.0, 1.0};
    REQUIRE_THROWS_AS(epstein_zeta(i, normalization::induced, cplx(1.0, 0.0)), pole_point);
    REQUIRE_THROWS_AS(epstein_zeta(i, normalization::induced, cplx(31.0, 0.0)),
                      std::invalid_argument);
}

TEST_CASE("torus expansion coefficients") {
    const tau_point<double> tau{0.0, 2.0};
    const auto ind = torus_expansion(tau, normalization::induced);
    REQUIRE(ind.order == 1);
    REQUIRE(ind.source == expansion_source::analytic);
    REQUIRE_THAT(ind.coefficients[0], WithinAbs(-1.0, 1e-15));
    REQUIRE_THAT(ind.coefficients[1], WithinRel(2.0 / (4.0 * pi), 1e-15));
    const auto uv = torus_expansion(tau, normalization::unit_volume);
    REQUIRE_THAT(uv.coefficients[1], WithinRel(1.0 / (4.0 * pi), 1e-15));
}

TEST_CASE("extract heat coefficients from a sampled trace") {
    const tau_point<double> tau{0.0, 1.0};
    const auto tr = make_torus_trace(tau, normalization::unit_volume);
    const auto grid = log_spaced(1e-4, 1e-2, 25);
    const auto fit = extract_heat_coefficients(tr, 1, 1, grid);
    REQUIRE(fit.source == expansion_source::fitted);
    REQUIRE_THAT(fit.coefficients[1], WithinAbs(1.0 / (4.0 * pi), 1e-6));
    REQUIRE_THAT(fit.coefficients[0], WithinAbs(-1.0, 1e-4));
    REQUIRE_THROWS_AS(extract_heat_coefficients(tr, 0, 1, grid), std::invalid_argument);
}

TEST_CASE("mellin determinants match frozen values") {
    const auto zi = mellin_torus(tau_point<double>{0.0, 1.0}, normalization::induced);
    REQUIRE_THAT(zi.determinant, WithinRel(0.34830098242141921, 1e-10));
    REQUIRE_THAT(zi.zeta_at_0, WithinAbs(-1.0, 1e-8));
    REQUIRE_THAT(zi.psi1, WithinRel(1.7114814174604387, 1e-9));
    const auto z2 = mellin_torus(tau_point<double>{0.0, 2.0}, normalization::induced);
    REQUIRE_THAT(z2.determinant, WithinRel(0.49257197312824402, 1e-10));
    REQUIRE_THAT(z2.psi2, WithinRel(9.587088294297573e-06, 1e-6));
    REQUIRE(z2.psi2 > 0.0);
}

TEST_CASE("translated torus keeps the determinant") {
    const auto a = mellin_torus(tau_point<double>{0.0, 1.0}, normalization::induced);
    const auto b = mellin_torus(tau_point<double>{1.0, 1.0}, normalization::induced);
    REQUIRE_THAT(a.determinant, WithinRel(b.determinant, 1e-10));
}

TEST_CASE("mellin and epstein routes agree") {
    for (auto tau : {tau_point<double>{0.3, 0.9}, {0.5, 1.5}}) {
        const double dm = mellin_torus(tau, normalization::induced).determinant;
        const double de =
            regularized_determinant_epstein(tau, normalization::induced).determinant;
        REQUIRE_THAT(dm, WithinRel(de, 1e-9));
    }
}

TEST_CASE("synthetic spectrum zeta data") {
    // spectrum {0, 1, 1, 4}: zeta(0) = 3, det = product of positive eigenvalues = 4
    const auto tr = make_spectrum_trace<double>({0.0, 1.0, 1.0, 4.0});
    asymptotic_expansion<double> ex;
    ex.order = 0;
    ex.coefficients = {3.0};
    ex.source = expansion_source::analytic;
    const auto z = mellin_b_coefficients(tr, ex, 1, 1e-10);
    REQUIRE_THAT(z.zeta_at_0, WithinAbs(3.0, 1e-10));
    REQUIRE_THAT(z.determinant, WithinRel(4.0, 1e-10));
    REQUIRE_THAT(z.zeta_prime_at_0, WithinRel(-std::log(4.0), 1e-10));
}

TEST_CASE("epstein determinant equals the closed form") {
    for (auto tau : {tau_point<double>{0.0, 1.0}, {0.5, 1.5}, {-0.3, 0.8}}) {
        const double det =
            regularized_determinant_epstein(tau, normalization::induced).determinant;
        const double ae = std::abs(eta(tau, 1e-14));
        REQUIRE_THAT(det, WithinRel(tau.im * tau.im * ae * ae * ae * ae, 1e-10));
    }
}

TEST_CASE("a0 constancy scan") {
    std::vector<tau_point<double>> tori;
    for (int k = 0; k < 10; ++k) tori.push_back({-0.4 + 0.09 * k, 0.85 + 0.14 * k});
    const auto rep = a0_constancy_scan(tori, normalization::unit_volume);
    REQUIRE(rep.passed);
    REQUIRE(rep.a0_values.size() == 10);
    REQUIRE_THAT(rep.mean_a0, WithinAbs(-1.0, 1e-6));
    REQUIRE(rep.max_deviation < 1e-4);

    const auto single = a0_constancy_scan(std::vector<tau_point<double>>{{0.1, 1.2}},
                                          normalization::induced);
    REQUIRE(single.passed);
    REQUIRE(single.max_deviation == 0.0);
    REQUIRE_THROWS_AS(a0_constancy_scan(std::vector<tau_point<double>>{},
                                        normalization::induced),
                      std::invalid_argument);
}

TEST_CASE("log spaced grid") {
    const auto g = log_spaced(1e-4, 1e-1, 7);
    REQUIRE(g.size() == 7);
    REQUIRE_THAT(g.front(), WithinRel(1e-4, 1e-12));
    REQUIRE_THAT(g.back(), WithinRel(1e-1, 1e-12));
    for (std::size_t k = 1; k < g.size(); ++k) {
        REQUIRE(g[k] > g[k - 1]);
        REQUIRE_THAT(g[k] / g[k - 1], WithinRel(g[1] / g[0], 1e-10));
    }
}

TEST_CASE("mellin rejects malformed expansions") {
    const auto tr = make_spectrum_trace<double>({0.0, 1.0});
    asymptotic_expansion<double> bad;
    bad.order = 1;
    bad.coefficients = {1.0};  // wrong length
    REQUIRE_THROWS_AS(mellin_b_coefficients(tr, bad, 1, 1e-10), std::invalid_argument);
    asymptotic_expansion<double> sloppy;
    sloppy.order = 0;
    sloppy.coefficients = {1.0};
    sloppy.source = expansion_source::fitted;
    sloppy.fit_residual = 1.0;  // untrustworthy fit
    REQUIRE_THROWS_AS(mellin_b_coefficients(tr, sloppy, 1, 1e-10), std::invalid_argument);
}
