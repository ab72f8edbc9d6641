#include <catch2/catch_amalgamated.hpp>

#include <etalab/cy_coefficients.hpp>
#include <etalab/spectral_zeta.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <vector>

using namespace etalab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double pi = std::numbers::pi;

std::filesystem::path temp_file(const char* stem) {
    return std::filesystem::temp_directory_path() / stem;
}
}  // namespace

TEST_CASE("gilkey coefficient arithmetic") {
    REQUIRE_THAT(gilkey_a_minus1(curvature_inputs<double>{0.0, 0.0, 0.0, 1440.0 * pi, 0.0}),
                 WithinRel(-12.0, 1e-14));
    REQUIRE_THAT(gilkey_a_minus1(curvature_inputs<double>{1440.0 * pi, 0.0, 0.0, 0.0, 0.0}),
                 WithinRel(5.0, 1e-14));
    REQUIRE_THAT(gilkey_a_minus1(curvature_inputs<double>{0.0, 720.0 * pi, 0.0, 0.0, 0.0}),
                 WithinRel(-1.0, 1e-14));
    // linearity
    const curvature_inputs<double> a{1.0, 2.0, 0.0, 3.0, 0.0};
    const curvature_inputs<double> b{2.0, 4.0, 0.0, 6.0, 0.0};
    REQUIRE_THAT(gilkey_a_minus1(b), WithinRel(2.0 * gilkey_a_minus1(a), 1e-14));
}

TEST_CASE("calabi identity residual") {
    for (double r : {0.0, 1.0, 2.5, 7.0})
        REQUIRE(calabi_identity_residual(curvature_inputs<double>{0.0, r, 0.0, 0.0, r}) == 0.0);
    REQUIRE_THAT(calabi_identity_residual(curvature_inputs<double>{3.0, 1.0, 2.0, 0.0, 1.5}),
                 WithinRel(2.0 * 3.0 - 1.0 - 2.0 + 1.5, 1e-14));
}

TEST_CASE("curvature input validation") {
    REQUIRE_THROWS_AS(curvature_inputs<double>(-1.0, 0.0, 0.0, 0.0, 0.0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(curvature_inputs<double>(0.0, -1.0, 0.0, 0.0, 0.0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(curvature_inputs<double>(0.0, 0.0, -1.0, 0.0, 0.0),
                      std::invalid_argument);
    // integrated laplacian may be negative
    REQUIRE_NOTHROW(curvature_inputs<double>(0.0, 0.0, 0.0, -5.0, 0.0));
}

TEST_CASE("threefold heat coefficients for the quintic") {
    const auto coeffs = cy3_heat_coefficients(chern_data<double>{3, 5.0, 50.0});
    REQUIRE(coeffs.size() == 3);
    REQUIRE_THAT(coeffs.at(3), WithinRel(0.39788735772973838, 1e-15));
    REQUIRE(coeffs.at(2) == 0.0);
    REQUIRE_THAT(coeffs.at(1), WithinRel(-0.022104853207207686, 1e-15));
    REQUIRE_THAT(coeffs.at(3), WithinRel(5.0 / (4.0 * pi), 1e-15));
    REQUIRE_THAT(coeffs.at(1), WithinRel(-50.0 / (720.0 * pi), 1e-15));
}

TEST_CASE("threefold formulas reject other dimensions") {
    REQUIRE_THROWS_AS(cy3_heat_coefficients(chern_data<double>{2, 1.0, 0.0}),
                      dimension_mismatch);
    REQUIRE_THROWS_AS(cy3_heat_coefficients(chern_data<double>{4, 1.0, 0.0}),
                      dimension_mismatch);
}

TEST_CASE("chern data validation") {
    REQUIRE_THROWS_AS(chern_data<double>(0, 1.0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(chern_data<double>(3, 0.0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(chern_data<double>(3, -2.0, 0.0), std::invalid_argument);
    REQUIRE_NOTHROW(chern_data<double>(3, 0.0, 0.0, {}, true));
}

TEST_CASE("conjectured coefficients") {
    const chern_data<double> quintic{3, 5.0, 50.0};
    const std::map<int, double> b = {{3, 1.0 / (4.0 * pi)}, {1, -1.0 / (720.0 * pi)}};
    const auto conj = conjectured_coefficients(quintic, b);
    const auto closed = cy3_heat_coefficients(quintic);
    REQUIRE_THAT(conj.at(3), WithinRel(closed.at(3), 1e-15));
    REQUIRE_THAT(conj.at(1), WithinRel(closed.at(1), 1e-15));

    // explicit higher entries win over the fallback
    const chern_data<double> custom{3, 5.0, 50.0, {{3, 2.0}}};
    REQUIRE_THAT(conjectured_coefficients(custom, b).at(3), WithinRel(2.0 / (4.0 * pi), 1e-15));

    const std::map<int, double> b2 = {{2, 1.0}};
    REQUIRE_THROWS_AS(conjectured_coefficients(quintic, b2), missing_chern_entry);
}

TEST_CASE("mellin constant block") {
    asymptotic_expansion<double> ex;
    ex.order = 2;
    ex.coefficients = {-1.0, 0.5, 0.25};
    ex.source = expansion_source::analytic;
    const double gamma = 0.57721566490153286;
    REQUIRE_THAT(mellin_constant_block(ex),
                 WithinRel(gamma * (-1.0) - 0.5 / 1.0 - 0.25 / 2.0, 1e-14));
}

TEST_CASE("b1 from an externally supplied trace") {
    const auto tr = make_spectrum_trace<double>({0.0, 1.0, 1.0, 4.0});
    asymptotic_expansion<double> ex;
    ex.order = 0;
    ex.coefficients = {3.0};
    ex.source = expansion_source::analytic;
    const auto z = b1_from_trace(tr, ex, 1);
    REQUIRE_THAT(z.determinant, WithinRel(4.0, 1e-10));
    REQUIRE_THAT(z.zeta_at_0, WithinAbs(3.0, 1e-10));

    // torus fixture: identical to the spectral_zeta pipeline
    const tau_point<double> tau{0.0, 2.0};
    const auto trace = make_torus_trace(tau, normalization::induced);
    const auto expn = torus_expansion(tau, normalization::induced);
    const auto a = b1_from_trace(trace, expn, 1);
    const auto bref = mellin_b_coefficients(trace, expn, 1, 1e-10);
    REQUIRE(a.determinant == bref.determinant);
    REQUIRE(a.b1 == bref.b1);
    REQUIRE(a.psi1 == bref.psi1);
}

TEST_CASE("eigenvalue file roundtrip") {
    const auto path = temp_file("etalab_ev_roundtrip.txt");
    const std::vector<double> ev = {0.0, 1.0, 1.0, 4.0, 9.869604401089358};
    save_eigenvalues(path.string(), ev);
    const auto back = load_eigenvalues<double>(path.string());
    REQUIRE(back == ev);
    std::filesystem::remove(path);
}

TEST_CASE("eigenvalue file rejects junk") {
    const auto path = temp_file("etalab_ev_junk.txt");
    {
        std::ofstream f(path);
        f << "# comment line\n1.5\n2.5 trailing garbage\n";
    }
    REQUIRE_THROWS_AS(load_eigenvalues<double>(path.string()), std::runtime_error);
    std::filesystem::remove(path);
    REQUIRE_THROWS_AS(load_eigenvalues<double>("/nonexistent/etalab_ev.txt"),
                      std::runtime_error);
}

TEST_CASE("chern json roundtrip") {
    const chern_data<double> quintic{3, 5.0, 50.0, {{3, 0.125}}};
    const auto text = chern_to_json(quintic);
    const auto back = chern_from_json<double>(text);
    REQUIRE(back.n == 3);
    REQUIRE(back.l_top == 5.0);
    REQUIRE(back.c2_l == 50.0);
    REQUIRE(back.higher.at(3) == 0.125);

    REQUIRE_THROWS_AS(chern_from_json<double>("{not json"), std::runtime_error);
    REQUIRE_THROWS_AS(chern_from_json<double>("{\"n\": 3}"), std::runtime_error);
    REQUIRE_THROWS_AS(chern_from_json<double>("{\"n\": 3, \"L_top\": 0, \"c2_L\": 1}"),
                      std::invalid_argument);
    REQUIRE_NOTHROW(chern_from_json<double>("{\"n\": 3, \"L_top\": 0, \"c2_L\": 1}", true));
}
