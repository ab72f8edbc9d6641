// Tracks periods toward each boundary point of the lambda line, then prints
// the three monodromy matrices. Build target: demo_degeneration.

#include <etalab/etalab.hpp>

#include <cstdio>

using namespace etalab;
using cplx = std::complex<double>;

static void print_matrix(const char* name, const monodromy_matrix& m) {
    std::printf("%-8s [[%lld, %lld], [%lld, %lld]]\n", name,
                static_cast<long long>(m.entries[0][0]), static_cast<long long>(m.entries[0][1]),
                static_cast<long long>(m.entries[1][0]), static_cast<long long>(m.entries[1][1]));
}

int main() {
    std::printf("lambda -> 0 along the real axis:\n");
    std::printf("%-10s %-22s %-22s\n", "r", "l2 norm", "pi l2 growth ratio");
    for (double r : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const auto p = legendre_periods(cplx(r, 0.0));
        std::printf("%-10.1e %-22.15g %-22.15g\n", r, p.l2_norm,
                    p.l2_norm / std::log(16.0 / r));
    }

    std::printf("\nmonodromy in the transported frame, basepoint 1/2:\n");
    print_matrix("zero", monodromy_around(cusp_label::zero, cplx(0.5, 0.0)));
    print_matrix("one", monodromy_around(cusp_label::one, cplx(0.5, 0.0)));
    print_matrix("inf", monodromy_around(cusp_label::infinity, cplx(0.5, 0.0)));

    std::printf("\nequianharmonic family y^2 = x^3 - s, one winding of s:\n");
    const cplx p0 = equianharmonic_period(cplx(1.0, 0.0), 0);
    const cplx p1 = equianharmonic_period(cplx(1.0, 0.0), 1);
    std::printf("P(1)          = %.15g + %.15gi\n", p0.real(), p0.imag());
    std::printf("P(1) after    = %.15g + %.15gi\n", p1.real(), p1.imag());
    std::printf("ratio         = %.15g + %.15gi  (sixth root of unity)\n", (p1 / p0).real(),
                (p1 / p0).imag());

    std::vector<double> radii;
    for (int k = 0; k < 17; ++k) radii.push_back(1e-4 * std::pow(1e-4, k / 16.0));
    const auto leg = boundary_growth_fit(growth_family::legendre_at_0, radii);
    const auto equi = boundary_growth_fit(growth_family::equianharmonic, radii);
    std::printf("\ngrowth toward lambda = 0: logarithmic, slope %.6f (r2 %.9f)\n", leg.constant,
                leg.fit_r2);
    std::printf("growth of |P|^2 in s:     power, exponent %.6f (r2 %.9f)\n", equi.exponent,
                equi.fit_r2);
    return 0;
}
