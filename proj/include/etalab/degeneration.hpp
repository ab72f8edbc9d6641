#ifndef ETALAB_DEGENERATION_HPP
#define ETALAB_DEGENERATION_HPP

#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <vector>

#include "core.hpp"
#include "detail/linalg.hpp"

namespace etalab {

namespace detail {

/// Direct Gauss series sum_n ((1/2)_n / n!)^2 z^n, |z| < 1 (practical |z| <~ 0.95).
template <std::floating_point T>
std::complex<T> hyp_half_series(std::complex<T> z, T tol, std::size_t cap) {
    const T az = std::abs(z);
    if (!(az < T(0.97)))
        throw convergence_failure("hyp_half_series: argument too close to the unit circle");
    std::complex<T> sum(T(1), T(0)), term(T(1), T(0));
    for (std::size_t n = 0; n < cap; ++n) {
        const T r = (T(0.5) + static_cast<T>(n)) / (T(1) + static_cast<T>(n));
        term *= z * r * r;
        sum += term;
        if (std::abs(term) / (T(1) - az) < tol / T(2)) return sum;
    }
    throw convergence_failure("hyp_half_series: term cap reached");
}

/// Logarithmic connection series at z -> 1 (u = 1 - z, |u| <= 1/2):
/// F(1/2,1/2;1;z) = (1/pi) sum_n c_n (2 psi(n+1) - 2 psi(n+1/2) - log u) u^n,
/// c_n = ((1/2)_n/n!)^2. Principal log; invalid on u <= 0.
template <std::floating_point T>
std::complex<T> hyp_half_log_series(std::complex<T> u, T tol, std::size_t cap) {
    const T pi = std::numbers::pi_v<T>;
    const T au = std::abs(u);
    if (!(au < T(0.75)))
        throw convergence_failure("hyp_half_log_series: expansion variable too large");
    const std::complex<T> lg = std::log(u);
    T psi1 = -std::numbers::egamma_v<T>;                    // psi(1)
    T psih = -std::numbers::egamma_v<T> - T(2) * std::numbers::ln2_v<T>;  // psi(1/2)
    std::complex<T> cn(T(1), T(0));
    std::complex<T> sum{};
    for (std::size_t n = 0; n < cap; ++n) {
        if (n > 0) {
            const T nn = static_cast<T>(n);
            const T r = (nn - T(0.5)) / nn;
            cn *= u * r * r;
            psi1 += T(1) / nn;
            psih += T(1) / (nn - T(0.5));
        }
        const std::complex<T> term = cn * (T(2) * (psi1 - psih) - lg);
        sum += term;
        const T scale = T(2) * std::abs(psi1 - psih) + std::abs(lg) + T(4);
        if (std::abs(cn) * scale / (T(1) - au) < tol / T(2)) return sum / pi;
    }
    throw convergence_failure("hyp_half_log_series: term cap reached");
}

/// Series for F(3/2,3/2;2;z), |z| <~ 0.6; feeds the derivative
/// F'(1/2,1/2;1;z) = (1/4) F(3/2,3/2;2;z).
template <std::floating_point T>
std::complex<T> hyp_3232_series(std::complex<T> z, T tol, std::size_t cap) {
    const T az = std::abs(z);
    if (!(az < T(0.8)))
        throw convergence_failure("hyp_3232_series: argument too large for the direct series");
    std::complex<T> sum(T(1), T(0)), term(T(1), T(0));
    for (std::size_t n = 0; n < cap; ++n) {
        const T nn = static_cast<T>(n);
        const T r = (T(1.5) + nn) * (T(1.5) + nn) / ((T(2) + nn) * (T(1) + nn));
        term *= z * r;
        sum += term;
        if (std::abs(term) * T(2) / (T(1) - az) < tol / T(2)) return sum;
    }
    throw convergence_failure("hyp_3232_series: term cap reached");
}

template <std::floating_point T>
void check_lambda_cut(std::complex<T> lambda, const char* who) {
    if (lambda.imag() == T(0) && lambda.real() >= T(1)) {
        if (lambda.real() == T(1)) throw branch_point(std::string(who) + ": branch point at lambda = 1");
        throw convergence_failure(std::string(who) +
                                  ": lambda on the cut [1, inf); no continuation path given");
    }
}

} // namespace detail

/// F(1/2, 1/2; 1; lambda) on the principal branch (cut along [1, inf)).
/// Region map: direct series for |lambda| <= 1/2, the z -> 1 logarithmic
/// connection for |1 - lambda| <= 1/2, Pfaff w = lambda/(lambda-1) into one of
/// those two otherwise, and the direct series again inside the unit disc gap.
template <std::floating_point T>
std::complex<T> hypergeometric_2f1_half(std::complex<T> lambda, T tol = T(1e-12),
                                        const sum_limits& limits = default_limits()) {
    using C = std::complex<T>;
    if (!(tol > T(0))) throw std::invalid_argument("hypergeometric_2f1_half: tol must be positive");
    detail::check_lambda_cut(lambda, "hypergeometric_2f1_half");
    const C one(T(1), T(0));
    if (std::abs(lambda) <= T(0.5))
        return detail::hyp_half_series(lambda, tol, limits.series_cap);
    if (std::abs(one - lambda) <= T(0.5))
        return detail::hyp_half_log_series(one - lambda, tol, limits.series_cap);
    const C w = lambda / (lambda - one);
    const C pfaff = std::pow(one - lambda, C(T(-0.5), T(0)));
    const T apf = std::abs(pfaff);
    if (std::abs(w) <= T(0.5))
        return pfaff * detail::hyp_half_series(w, tol / apf, limits.series_cap);
    if (std::abs(one - w) <= T(0.5))
        return pfaff * detail::hyp_half_log_series(one - w, tol / apf, limits.series_cap);
    // unit-disc gap (0.5 < |lambda| < 1 in a band): direct series still converges
    return detail::hyp_half_series(lambda, tol, limits.series_cap);
}

template <std::floating_point T>
struct period_pair {
    std::complex<T> pi1;
    std::complex<T> pi2;
    tau_point<T> tau;
    T l2_norm;
};

/// Periods of y^2 = x(x-1)(x-lambda):
///   pi1 = pi F(1/2,1/2;1;lambda),  pi2 = i pi F(1/2,1/2;1;1-lambda),
/// tau = pi2/pi1 in the upper half-plane, and the L2 norm of dx/y realized as
/// |Im(conj(pi1) pi2)| = Im tau |pi1|^2.
template <std::floating_point T>
period_pair<T> legendre_periods(std::complex<T> lambda, T tol = T(1e-12)) {
    using C = std::complex<T>;
    if (lambda == C{} || lambda == C(T(1), T(0)))
        throw invalid_lambda("legendre_periods: lambda at a singular fiber {0, 1}");
    const T pi = std::numbers::pi_v<T>;
    const C p1 = pi * hypergeometric_2f1_half(lambda, tol);
    const C p2 = C(T(0), pi) * hypergeometric_2f1_half(C(T(1), T(0)) - lambda, tol);
    const C ratio = p2 / p1;
    const T l2 = std::abs((std::conj(p1) * p2).imag());
    return {p1, p2, tau_point<T>(ratio), l2};
}

struct monodromy_matrix {
    std::array<std::array<std::int64_t, 2>, 2> entries;
};

enum class cusp_label { zero, one, infinity, none };

namespace detail {

/// Picard-Fuchs right-hand side for the Legendre family:
/// y'' = [ (2z - 1) y' + y/4 ] / ( z (1 - z) ), state = (p1, p1', p2, p2').
template <std::floating_point T>
std::array<std::complex<T>, 4> pf_rhs(const std::array<std::complex<T>, 4>& y, std::complex<T> z,
                                      std::complex<T> dz) {
    using C = std::complex<T>;
    const C denom = z * (C(T(1), T(0)) - z);
    const C f = T(2) * z - C(T(1), T(0));
    return {y[1] * dz, ((f * y[1] + y[0] / T(4)) / denom) * dz,
            y[3] * dz, ((f * y[3] + y[2] / T(4)) / denom) * dz};
}

template <std::floating_point T>
using pf_state = std::array<std::complex<T>, 4>;

template <std::floating_point T>
pf_state<T> rk4_leg(pf_state<T> y, auto&& path, auto&& dpath, int n) {
    const T h = T(1) / static_cast<T>(n);
    for (int i = 0; i < n; ++i) {
        const T u = static_cast<T>(i) * h;
        auto add = [](const pf_state<T>& a, const pf_state<T>& b, T f) {
            pf_state<T> r;
            for (int k = 0; k < 4; ++k) r[k] = a[k] + b[k] * f;
            return r;
        };
        const auto k1 = pf_rhs(y, path(u), dpath(u));
        const auto k2 = pf_rhs(add(y, k1, h / T(2)), path(u + h / T(2)), dpath(u + h / T(2)));
        const auto k3 = pf_rhs(add(y, k2, h / T(2)), path(u + h / T(2)), dpath(u + h / T(2)));
        const auto k4 = pf_rhs(add(y, k3, h), path(u + h), dpath(u + h));
        for (int k = 0; k < 4; ++k)
            y[k] += (k1[k] + T(2) * k2[k] + T(2) * k3[k] + k4[k]) * (h / T(6));
    }
    return y;
}

/// Transport the frame along the straight segment a -> b with n RK4 steps.
template <std::floating_point T>
pf_state<T> pf_segment(pf_state<T> y, std::complex<T> a, std::complex<T> b, int n) {
    return rk4_leg<T>(std::move(y), [=](T u) { return a + (b - a) * u; },
                      [=](T) { return b - a; }, n);
}

/// Full circle around c of radius r, starting/ending at angle th0;
/// orient = +1 counterclockwise, -1 clockwise.
template <std::floating_point T>
pf_state<T> pf_circle(pf_state<T> y, std::complex<T> c, T r, T th0, int orient, int n) {
    using C = std::complex<T>;
    const T two_pi = T(2) * std::numbers::pi_v<T>;
    return rk4_leg<T>(
        std::move(y),
        [=](T u) { return c + r * std::exp(C(T(0), th0 + static_cast<T>(orient) * two_pi * u)); },
        [=](T u) {
            return C(T(0), static_cast<T>(orient) * two_pi) * r *
                   std::exp(C(T(0), th0 + static_cast<T>(orient) * two_pi * u));
        },
        n);
}

/// Reference frame at the fixed basepoint 1/2: exact series values for
/// (pi1, pi1', pi2, pi2').
template <std::floating_point T>
pf_state<T> pf_frame_at_half() {
    using C = std::complex<T>;
    const T pi = std::numbers::pi_v<T>;
    const C half(T(0.5), T(0));
    const T tol = T(1e-14);
    const C f = hyp_half_series(half, tol, 100000);
    const C fd = hyp_3232_series(half, tol, 100000) / T(4);
    // pi2(z) = i pi F(1-z) so pi2' = -i pi F'(1-z); at z = 1/2 both args agree
    return {pi * f, pi * fd, C(T(0), pi) * f, C(T(0), -pi) * fd};
}

} // namespace detail

/// Monodromy of the Legendre period pair around a cusp, computed by RK4
/// continuation of the Picard-Fuchs system along a lasso: basepoint -> hub
/// above the real axis -> standoff circle around the cusp -> back. The result
/// expresses the continued pair in the frame transported from lambda = 1/2:
/// A = W0^{-1} W_loop. Step counts double until the rounded integer matrix is
/// stable with residual < 1e-6.
template <std::floating_point T>
monodromy_matrix monodromy_around(cusp_label cusp, std::complex<T> basepoint, int steps = 256) {
    using C = std::complex<T>;
    if (steps < 64) throw std::invalid_argument("monodromy_around: steps must be >= 64");
    if (std::abs(basepoint) < T(0.05) || std::abs(basepoint - C(T(1), T(0))) < T(0.05))
        throw std::invalid_argument("monodromy_around: basepoint too close to a cusp");

    const C hub(T(0.5), T(0.75));
    const C half(T(0.5), T(0));
    const T pi = std::numbers::pi_v<T>;

    auto run = [&](int n) -> std::array<std::array<T, 2>, 2> {
        auto w0 = detail::pf_frame_at_half<T>();
        // transport the frame to the basepoint (hub route keeps clear of 0 and 1)
        auto wb = w0;
        if (basepoint != half) {
            wb = detail::pf_segment<T>(wb, half, hub, n);
            wb = detail::pf_segment<T>(wb, hub, basepoint, n);
        }
        auto w = wb;
        w = detail::pf_segment<T>(w, basepoint, hub, n);
        if (cusp == cusp_label::none) {
            const T r = T(0.1);
            w = detail::pf_circle<T>(w, hub, r, T(0), +1, n);
        } else if (cusp == cusp_label::infinity) {
            const T big = T(4);
            const C far = hub * (big / std::abs(hub));
            w = detail::pf_segment<T>(w, hub, far, n);
            // positive winding around infinity = clockwise in the lambda chart
            w = detail::pf_circle<T>(w, C{}, big, std::arg(far), -1, 4 * n);
            w = detail::pf_segment<T>(w, far, hub, n);
        } else {
            const C c = (cusp == cusp_label::zero) ? C{} : C(T(1), T(0));
            const T r = T(0.35);
            const C dir = (hub - c) / std::abs(hub - c);
            const C standoff = c + r * dir;
            w = detail::pf_segment<T>(w, hub, standoff, n);
            w = detail::pf_circle<T>(w, c, r, std::arg(dir), +1, 2 * n);
            w = detail::pf_segment<T>(w, standoff, hub, n);
        }
        w = detail::pf_segment<T>(w, hub, basepoint, n);

        // A = Wb^{-1} W, both 2x2 with columns (pi1, pi2), rows (value, derivative)
        const C det = wb[0] * wb[3] - wb[2] * wb[1];
        const C a00 = (wb[3] * w[0] - wb[2] * w[1]) / det;
        const C a01 = (wb[3] * w[2] - wb[2] * w[3]) / det;
        const C a10 = (-wb[1] * w[0] + wb[0] * w[1]) / det;
        const C a11 = (-wb[1] * w[2] + wb[0] * w[3]) / det;
        (void)pi;
        return {{{a00.real(), a01.real()}, {a10.real(), a11.real()}}};
        // imaginary parts feed the residual through the rounding check below
    };

    auto residual_of = [](const std::array<std::array<T, 2>, 2>& m) {
        T r = T(0);
        for (const auto& row : m)
            for (T v : row) r = std::max(r, std::abs(v - std::round(v)));
        return r;
    };

    std::array<std::array<T, 2>, 2> cur{};
    T res = T(1);
    int n = steps;
    for (int attempt = 0; attempt < 6; ++attempt, n *= 2) {
        auto m = run(n);
        const T r = residual_of(m);
        if (attempt > 0 && r < T(1e-6)) {
            bool stable = true;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    if (std::round(m[i][j]) != std::round(cur[i][j])) stable = false;
            if (stable) {
                monodromy_matrix out{};
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        out.entries[i][j] = static_cast<std::int64_t>(std::llround(m[i][j]));
                return out;
            }
        }
        cur = m;
        res = r;
    }
    throw continuation_failure("monodromy_around: integer entries did not stabilize, residual " +
                               std::to_string(static_cast<double>(res)));
}

enum class growth_family { legendre_at_0, equianharmonic };
enum class growth_kind { logarithmic, power };

template <std::floating_point T>
struct growth_law {
    growth_kind kind;
    T exponent;
    T constant;
    T fit_r2;
};

/// One period of dx/y on y^2 = x^3 - s over the cycle enclosing the roots
/// s^{1/3} and s^{1/3} rho, by the periodic trapezoid rule on a circle with
/// branch-tracked y. `winding` adds full turns to arg s so the s-plane
/// monodromy (order 6: one turn multiplies by e^{-i pi/3}) is exercisable:
/// the exact homogeneity is period(s) = period(1) * s^{-1/6}.
template <std::floating_point T>
std::complex<T> equianharmonic_period(std::complex<T> s, int winding = 0, T tol = T(1e-11)) {
    using C = std::complex<T>;
    if (s == C{}) throw std::invalid_argument("equianharmonic_period: s must be nonzero");
    const T pi = std::numbers::pi_v<T>;
    const T phi = std::arg(s) + T(2) * pi * static_cast<T>(winding);
    const T mag = std::pow(std::abs(s), T(1) / T(3));
    const C cbrt = mag * std::exp(C(T(0), phi / T(3)));
    const C rho(T(-0.5), std::sqrt(T(3)) / T(2));
    const C center = cbrt * (C(T(1), T(0)) + rho) / T(2);
    const T radius = T(1.1) * mag;

    // contour start rotates with s^{1/3}: x(theta) = center + radius e^{i(phi/3 + theta)}
    // keeps the rescaled shape x/cbrt fixed, so the starting branch phase
    // (phi + arg c0)/2 is continuous in the total argument phi
    const C x0_hat = center / cbrt + C(T(1.1), T(0));
    const C c0 = x0_hat * x0_hat * x0_hat - C(T(1), T(0));
    const C y0 = std::sqrt(std::abs(s) * std::abs(c0)) *
                 std::exp(C(T(0), (phi + std::arg(c0)) / T(2)));

    auto attempt = [&](int n) {
        C sum{};
        C prev_y = y0;
        const T dth = T(2) * pi / static_cast<T>(n);
        for (int k = 1; k <= n; ++k) {
            const T th = phi / T(3) + dth * static_cast<T>(k);
            const C e = std::exp(C(T(0), th));
            const C x = center + radius * e;
            C y = std::sqrt(x * x * x - s);
            if (std::abs(y - prev_y) > std::abs(y + prev_y)) y = -y;
            sum += (C(T(0), T(1)) * radius * e / y) * dth;
            prev_y = y;
        }
        if (std::abs(prev_y - y0) > std::abs(prev_y) * T(0.5))
            throw quadrature_failure("equianharmonic_period: branch did not close up");
        return sum;
    };

    C last = attempt(256);
    for (int n = 512; n <= 65536; n *= 2) {
        const C next = attempt(n);
        if (std::abs(next - last) < tol * (T(1) + std::abs(next))) return next;
        last = next;
    }
    throw quadrature_failure("equianharmonic_period: trapezoid refinement stalled");
}

/// Fits the near-cusp growth of the chosen family over the given radii.
/// Legendre at 0: l2_norm(lambda = r) against log(1/r), Logarithmic law with
/// the slope as `constant` (tends to pi). Equianharmonic: |period|^2 against
/// a power of |s|, Power law with fitted exponent (tends to -1/3). Both model
/// classes are fit each time; near-identical r^2 raises FitAmbiguous.
template <std::floating_point T>
growth_law<T> boundary_growth_fit(growth_family family, const std::vector<T>& radii) {
    if (radii.size() < 5) throw std::invalid_argument("boundary_growth_fit: need >= 5 radii");
    T lo = std::numeric_limits<T>::infinity(), hi = T(0);
    for (T r : radii) {
        if (!(r > T(0)) || !(r < T(1e-2)))
            throw std::invalid_argument("boundary_growth_fit: radii must lie in (0, 1e-2)");
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    if (!(hi / lo >= T(9999)))
        throw std::invalid_argument("boundary_growth_fit: radii must span >= 4 decades");

    std::vector<T> y(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (family == growth_family::legendre_at_0)
            y[i] = legendre_periods(std::complex<T>(radii[i], T(0))).l2_norm;
        else
            y[i] = detail::sq(std::abs(equianharmonic_period(std::complex<T>(radii[i], T(0)))));
    }

    std::vector<T> log_inv_r(radii.size()), log_r(radii.size()), log_y(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        log_inv_r[i] = std::log(T(1) / radii[i]);
        log_r[i] = std::log(radii[i]);
        log_y[i] = std::log(y[i]);
    }
    const auto log_model = detail::fit_line(log_inv_r, y);
    const auto pow_model = detail::fit_line(log_r, log_y);
    if (std::abs(log_model.r2 - pow_model.r2) < T(1e-4))
        throw fit_ambiguous("boundary_growth_fit: logarithmic and power fits are indistinguishable");

    if (family == growth_family::legendre_at_0)
        return {growth_kind::logarithmic, T(1), log_model.slope, log_model.r2};
    return {growth_kind::power, pow_model.slope, std::exp(pow_model.intercept), pow_model.r2};
}

} // namespace etalab

#endif
