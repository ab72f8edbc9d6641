#ifndef ETALAB_SPECTRAL_ZETA_HPP
#define ETALAB_SPECTRAL_ZETA_HPP

#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>
#include <vector>

#include "core.hpp"
#include "detail/gamma.hpp"
#include "detail/lattice.hpp"
#include "detail/linalg.hpp"
#include "detail/quadrature.hpp"
#include "torus_spectrum.hpp"

namespace etalab {

enum class expansion_source { analytic, fitted };

/// Short-time expansion Theta(t) - zero_modes ~ sum_{k=0..order} a_{-k} t^{-k};
/// coefficients[k] holds a_{-k}.
template <std::floating_point T>
struct asymptotic_expansion {
    std::vector<T> coefficients;
    int order = 0;
    T fit_residual = T(0);
    expansion_source source = expansion_source::fitted;
};

enum class zeta_method { mellin_split, epstein_analytic };

template <std::floating_point T>
struct zeta_result {
    T zeta_at_0 = T(0);
    T zeta_prime_at_0 = T(0);
    T b0 = T(0);
    T b1 = T(0);
    T determinant = T(0);
    T psi1 = T(0);
    T psi2 = T(0);
    zeta_method method = zeta_method::mellin_split;
};

/// n log-spaced points on [a, b].
template <std::floating_point T>
std::vector<T> log_spaced(T a, T b, std::size_t n) {
    if (!(a > T(0)) || !(b > a) || n < 2) throw std::invalid_argument("log_spaced: bad range");
    std::vector<T> g(n);
    const T la = std::log(a), lb = std::log(b);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(la + (lb - la) * static_cast<T>(i) / static_cast<T>(n - 1));
    g.front() = a;
    g.back() = b;
    return g;
}

/// Closed-form torus expansion: a_{-1} = Area/(4 pi), a_0 = -1 once the single
/// zero mode is removed; all deeper coefficients vanish.
template <std::floating_point T>
asymptotic_expansion<T> torus_expansion(const tau_point<T>& tau, normalization norm) {
    const T pi = std::numbers::pi_v<T>;
    asymptotic_expansion<T> e;
    e.coefficients = {T(-1), detail::torus_area(tau, norm) / (T(4) * pi)};
    e.order = 1;
    e.fit_residual = T(0);
    e.source = expansion_source::analytic;
    return e;
}

/// Least-squares extraction of the short-time coefficients of a heat trace:
/// fits Theta(t) - zero_modes against sum_{k=0..order} a_{-k} t^{-k} on t_grid.
/// The grid must cover at least two decades at or below 0.1 so the singular
/// terms separate from the constant.
template <std::floating_point T>
asymptotic_expansion<T> extract_heat_coefficients(const trace_function<T>& trace, int order,
                                                  int zero_modes, const std::vector<T>& t_grid,
                                                  T tol = T(1e-8)) {
    if (order < 1) throw std::invalid_argument("extract_heat_coefficients: order must be >= 1");
    if (zero_modes < 0) throw std::invalid_argument("extract_heat_coefficients: zero_modes must be >= 0");
    if (!(tol > T(0))) throw std::invalid_argument("extract_heat_coefficients: tol must be positive");
    T lo = std::numeric_limits<T>::infinity(), hi = T(0);
    for (T t : t_grid) {
        if (!(t > T(0)) || !std::isfinite(t))
            throw std::invalid_argument("extract_heat_coefficients: grid points must be positive");
        if (t <= T(0.1)) { lo = std::min(lo, t); hi = std::max(hi, t); }
    }
    if (!(hi > T(0)) || !(hi / lo >= T(99.999)))
        throw std::invalid_argument(
            "extract_heat_coefficients: t_grid must span two decades at or below 0.1");

    const T eval_tol = std::max(T(1e-14), tol / T(1000));
    const std::size_t m = t_grid.size();
    std::vector<std::vector<T>> cols(static_cast<std::size_t>(order) + 1, std::vector<T>(m));
    std::vector<T> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        const T t = t_grid[i];
        T p = T(1);
        for (int k = 0; k <= order; ++k) {
            cols[static_cast<std::size_t>(k)][i] = p;
            p /= t;
        }
        rhs[i] = trace.evaluate(t, eval_tol).first - static_cast<T>(zero_modes);
    }
    auto coef = detail::least_squares(cols, rhs);

    T ss = T(0);
    for (std::size_t i = 0; i < m; ++i) {
        T fitted = T(0);
        for (int k = 0; k <= order; ++k)
            fitted += coef[static_cast<std::size_t>(k)] * cols[static_cast<std::size_t>(k)][i];
        ss += detail::sq(rhs[i] - fitted);
    }
    const T rms = std::sqrt(ss / static_cast<T>(m));
    if (rms > tol)
        throw convergence_failure("extract_heat_coefficients: fit residual exceeds tolerance");

    asymptotic_expansion<T> e;
    e.coefficients = std::move(coef);
    e.order = order;
    e.fit_residual = rms;
    e.source = expansion_source::fitted;
    return e;
}

namespace detail {

/// Certified large-t integral int_T0^inf Theta'(t) dt/t: integrate to a T
/// where the exponential-decay tail bound Theta'(T)/(lambda1 T) drops under
/// tol, then absorb the bound into the error budget.
template <std::floating_point T>
T mellin_upper_integral(const trace_function<T>& trace, int zero_modes, T t0, T tol) {
    const T eval_tol = std::max(T(1e-15), tol / T(100));
    auto theta_prime = [&](T t) {
        return trace.evaluate(t, eval_tol).first - static_cast<T>(zero_modes);
    };
    T rate = trace.decay_rate;
    if (!(rate > T(0))) {
        const T h25 = theta_prime(T(25)), h50 = theta_prime(T(50));
        if (!(h50 > T(0))) rate = T(1);
        else rate = std::max(T(1e-3), std::log(h25 / h50) / T(25));
    }
    T upper = std::max(t0 * T(2), T(2));
    for (int i = 0; i < 24; ++i) {
        const T head = theta_prime(upper);
        if (head / (rate * upper) < tol / T(4) || head <= T(0)) break;
        upper *= T(2);
        if (upper > T(1e7))
            throw quadrature_failure("mellin_upper_integral: tail bound will not certify");
    }
    return integrate([&](T t) { return theta_prime(t) / t; }, t0, upper, tol, tol / T(4));
}

} // namespace detail

/// Mellin-split zeta data: psi1 integrates the expansion-subtracted trace on
/// (0, 1], psi2 the bare positive-spectrum trace on [1, inf), and
///   b0 = a_0,   b1 = gamma a_0 - sum_{k>=1} a_{-k}/k + psi1 + psi2,
/// with determinant exp(-b1). The minus sign on the pole sum is pinned by the
/// independent Epstein route (see the tests); 1/Gamma(s) = s + gamma s^2 + ...
/// makes each a_{-k}/(s-k) pole feed -a_{-k}/k into zeta'(0).
template <std::floating_point T>
zeta_result<T> mellin_b_coefficients(const trace_function<T>& trace,
                                     const asymptotic_expansion<T>& expansion, int zero_modes,
                                     T tol = T(1e-10)) {
    if (zero_modes < 0) throw std::invalid_argument("mellin_b_coefficients: zero_modes must be >= 0");
    if (!(tol > T(0))) throw std::invalid_argument("mellin_b_coefficients: tol must be positive");
    if (expansion.order < 0 ||
        expansion.coefficients.size() != static_cast<std::size_t>(expansion.order) + 1)
        throw std::invalid_argument("mellin_b_coefficients: malformed expansion");
    if (expansion.source == expansion_source::fitted && !(expansion.fit_residual <= T(1e-6)))
        throw std::invalid_argument("mellin_b_coefficients: expansion residual too large to trust");

    const T eval_tol = std::max(T(1e-15), tol / T(100));
    auto theta_prime = [&](T t) {
        return trace.evaluate(t, eval_tol).first - static_cast<T>(zero_modes);
    };
    const auto& a = expansion.coefficients;
    auto integrand = [&](T t) {
        T model = T(0);
        T p = T(1);
        for (int k = 0; k <= expansion.order; ++k) {
            model += a[static_cast<std::size_t>(k)] * p;
            p /= t;
        }
        return (theta_prime(t) - model) / t;
    };

    // The subtracted trace cancels O(1/t) quantities, so below some t the
    // samples are rounding noise that the adaptive rule would chase forever.
    // Cut at the largest dyadic t_lo whose local contribution t * |g(t)| (and
    // that of the next finer level) is under tol/20; the discarded dyadic
    // blocks then sum to O(tol/10) for any integrand decaying past the cut.
    T t_lo = T(0);
    for (T probe = T(0.01); probe > T(1e-6); probe /= T(2)) {
        if (std::abs(integrand(probe)) * probe < tol / T(20) &&
            std::abs(integrand(probe / T(2))) * probe < tol / T(20)) {
            t_lo = probe;
            break;
        }
    }
    const T psi1 = detail::integrate(integrand, t_lo, T(1), tol, tol / T(4));

    const T psi2 = detail::mellin_upper_integral(trace, zero_modes, T(1), tol);

    const T eu = std::numbers::egamma_v<T>;
    T pole_sum = T(0);
    for (int k = 1; k <= expansion.order; ++k)
        pole_sum += a[static_cast<std::size_t>(k)] / static_cast<T>(k);

    zeta_result<T> r;
    r.b0 = a[0];
    r.b1 = eu * a[0] - pole_sum + psi1 + psi2;
    r.zeta_at_0 = r.b0;
    r.zeta_prime_at_0 = r.b1;
    r.determinant = std::exp(-r.b1);
    r.psi1 = psi1;
    r.psi2 = psi2;
    r.method = zeta_method::mellin_split;
    return r;
}

namespace detail {

/// Lattice points with norm <= R chosen so the Gaussian-type remainder of the
/// incomplete-gamma sums is below tol; R is also inflated past the turnover of
/// the polynomial factor |x|^{p} e^{-c x^2}.
template <std::floating_point T>
std::vector<lattice_point<T>> epstein_points(const lattice_basis<T>& b, T c, T poly, T tol) {
    const T lmin = shortest_vector_length(b);
    auto [radius, k] = gauss_tail_radius(c, b.covolume(), lmin, tol);
    (void)k;
    radius = std::max(radius, std::sqrt((poly + T(4)) / c));
    return points_in_disc(b, radius, sum_limits::hard_cap);
}

} // namespace detail

/// Spectral zeta of the torus Laplacian at complex s, analytically continued
/// through the t = 1 split of the Mellin integral:
///   zeta(s) = -1/Gamma(s+1)
///           + [ A/(4 pi (s-1)) + S1(s) + S2(s) ] / Gamma(s),
///   S1(s) = (A/4pi) sum'_w (|w|^2/4)^{s-1} Gamma(1-s, |w|^2/4)   (periods w)
///   S2(s) = sum'_l l^{-s} Gamma(s, l)                            (eigenvalues l)
/// Both sums converge superexponentially for every s; the only pole is s = 1.
template <std::floating_point T>
std::complex<T> epstein_zeta(const tau_point<T>& tau, normalization norm, std::complex<T> s,
                             T tol = T(1e-12)) {
    using C = std::complex<T>;
    if (!(tol > T(0))) throw std::invalid_argument("epstein_zeta: tol must be positive");
    if (std::abs(s - C(T(1), T(0))) < T(1e-13))
        throw pole_point("epstein_zeta: simple pole at s = 1");
    if (std::abs(s) > T(30))
        throw std::invalid_argument("epstein_zeta: |s| beyond the supported range 30");

    const T pi = std::numbers::pi_v<T>;
    const T area = detail::torus_area(tau, norm);
    const T sig = std::abs(s.real()) + std::abs(s.imag());

    // dual side: integrals over (0,1] produce Gamma(1-s, |w|^2/4)
    const auto wpts = detail::epstein_points(detail::period_basis(tau, norm), T(0.25),
                                             T(2) * (sig + T(2)), tol / T(8));
    C s1{};
    for (auto it = wpts.rbegin(); it != wpts.rend(); ++it) {
        const T x = it->norm2 / T(4);
        s1 += std::pow(C(x, T(0)), s - C(T(1), T(0))) * detail::upper_gamma(C(T(1), T(0)) - s, x);
    }
    s1 *= area / (T(4) * pi);

    // direct side: integrals over [1,inf) produce Gamma(s, lambda)
    const auto lpts = detail::epstein_points(detail::eigenvalue_basis(tau, norm), T(1),
                                             T(2) * (sig + T(2)), tol / T(8));
    C s2{};
    for (auto it = lpts.rbegin(); it != lpts.rend(); ++it) {
        const T l = it->norm2;
        s2 += std::pow(C(l, T(0)), -s) * detail::upper_gamma(s, l);
    }

    const C one(T(1), T(0));
    return -detail::recip_gamma(s + one) +
           (C(area / (T(4) * pi), T(0)) / (s - one) + s1 + s2) * detail::recip_gamma(s);
}

/// Determinant through the same split evaluated term-by-term at s = 0 with the
/// derivative taken analytically:
///   zeta(0)  = -1
///   zeta'(0) = (A/4pi) sum'_w 4 e^{-|w|^2/4} / |w|^2 + sum'_l E1(l)
///            - A/(4 pi) - gamma_Euler
/// No numerical differentiation is involved.
template <std::floating_point T>
zeta_result<T> regularized_determinant_epstein(const tau_point<T>& tau, normalization norm,
                                               T tol = T(1e-12)) {
    if (!(tol > T(0)))
        throw std::invalid_argument("regularized_determinant_epstein: tol must be positive");
    const T pi = std::numbers::pi_v<T>;
    const T area = detail::torus_area(tau, norm);

    const auto wpts =
        detail::epstein_points(detail::period_basis(tau, norm), T(0.25), T(4), tol / T(8));
    T s1 = T(0);
    for (auto it = wpts.rbegin(); it != wpts.rend(); ++it)
        s1 += T(4) * std::exp(-it->norm2 / T(4)) / it->norm2;
    s1 *= area / (T(4) * pi);

    const auto lpts =
        detail::epstein_points(detail::eigenvalue_basis(tau, norm), T(1), T(4), tol / T(8));
    T s2 = T(0);
    for (auto it = lpts.rbegin(); it != lpts.rend(); ++it)
        s2 += detail::exp_int_e1(it->norm2);

    zeta_result<T> r;
    r.zeta_at_0 = T(-1);
    r.zeta_prime_at_0 = s1 + s2 - area / (T(4) * pi) - std::numbers::egamma_v<T>;
    r.b0 = r.zeta_at_0;
    r.b1 = r.zeta_prime_at_0;
    r.determinant = std::exp(-r.b1);
    r.psi1 = T(0);
    r.psi2 = T(0);
    r.method = zeta_method::epstein_analytic;
    return r;
}

template <std::floating_point T>
struct a0_scan_report {
    std::vector<T> a0_values;
    std::vector<T> a_minus1_values;
    std::vector<T> residuals;
    T mean_a0 = T(0);
    T max_deviation = T(0);
    bool passed = false;
};

/// Extracts a_0 for each tau on a per-point two-decade grid and reports the
/// spread around the mean; the scan passes when max deviation < 1e-4. A
/// single-point list is allowed and reports deviation 0. The grid top is tied
/// to the shortest period so the exponential remainder sits below the fit
/// tolerance everywhere.
template <std::floating_point T>
a0_scan_report<T> a0_constancy_scan(const std::vector<tau_point<T>>& tau_list, normalization norm,
                                    const sum_limits& limits = default_limits()) {
    if (tau_list.empty()) throw std::invalid_argument("a0_constancy_scan: empty tau list");
    a0_scan_report<T> rep;
    for (const auto& tau : tau_list) {
        const T lmin = detail::shortest_vector_length(detail::period_basis(tau, norm));
        const T t_max = std::min(T(0.01), lmin * lmin / T(100));
        const auto grid = log_spaced(t_max / T(100), t_max, 25);
        auto e = extract_heat_coefficients(make_torus_trace(tau, norm, limits), 1, 1, grid, T(1e-6));
        rep.a0_values.push_back(e.coefficients[0]);
        rep.a_minus1_values.push_back(e.coefficients[1]);
        rep.residuals.push_back(e.fit_residual);
    }
    T sum = T(0);
    for (T v : rep.a0_values) sum += v;
    rep.mean_a0 = sum / static_cast<T>(rep.a0_values.size());
    for (T v : rep.a0_values)
        rep.max_deviation = std::max(rep.max_deviation, std::abs(v - rep.mean_a0));
    rep.passed = rep.max_deviation < T(1e-4);
    return rep;
}

} // namespace etalab

#endif
