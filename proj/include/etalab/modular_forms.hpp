#ifndef ETALAB_MODULAR_FORMS_HPP
#define ETALAB_MODULAR_FORMS_HPP

#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <vector>

#include "core.hpp"
#include "detail/lattice.hpp"

namespace etalab {

template <std::floating_point T>
struct reduction_result {
    tau_point<T> tau_reduced;
    std::array<std::array<std::int64_t, 2>, 2> matrix;  // tau_reduced = (a tau + b)/(c tau + d)
};

namespace detail {

template <std::floating_point T>
struct reduction_step {
    std::int64_t shift;        // tau -> tau + shift, applied first
    bool invert;               // then tau -> -1/tau if set
    std::complex<T> tau_before_invert;
};

template <std::floating_point T>
struct reduction_word {
    std::complex<T> reduced;
    std::array<std::array<std::int64_t, 2>, 2> matrix;
    std::vector<reduction_step<T>> steps;
};

/// Standard SL2(Z) reduction to |Re| <= 1/2, |tau| >= 1, recording the word
/// so transformation factors can be unwound exactly by the series evaluators.
template <std::floating_point T>
reduction_word<T> reduce_word(const tau_point<T>& tau) {
    std::complex<T> z = tau.value();
    reduction_word<T> w;
    w.matrix = {{{1, 0}, {0, 1}}};
    auto apply_left = [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        auto& m = w.matrix;
        std::array<std::array<std::int64_t, 2>, 2> r;
        r[0][0] = a * m[0][0] + b * m[1][0];
        r[0][1] = a * m[0][1] + b * m[1][1];
        r[1][0] = c * m[0][0] + d * m[1][0];
        r[1][1] = c * m[0][1] + d * m[1][1];
        m = r;
    };
    for (int iter = 0; iter < 10000; ++iter) {
        reduction_step<T> step{0, false, {}};
        // floor(re + 1/2) sends Re = +1/2 to -1/2 and leaves -1/2 alone,
        // so the boundary cannot ping-pong
        const T k = std::floor(z.real() + T(0.5));
        if (k != T(0)) {
            step.shift = -static_cast<std::int64_t>(k);  // z -> z + shift
            z -= k;
            apply_left(1, step.shift, 0, 1);
        }
        if (std::norm(z) < T(1) - T(8) * std::numeric_limits<T>::epsilon()) {
            step.invert = true;
            step.tau_before_invert = z;
            z = -T(1) / z;
            apply_left(0, -1, 1, 0);
        }
        if (step.shift != 0 || step.invert) w.steps.push_back(step);
        if (!step.invert && std::abs(z.real()) <= T(0.5)) break;
    }
    w.reduced = z;
    return w;
}

} // namespace detail

/// Reduce tau to the standard fundamental domain; matrix acts by
/// fractional-linear transformation and has determinant 1.
template <std::floating_point T>
reduction_result<T> reduce_to_fundamental_domain(const tau_point<T>& tau) {
    auto w = detail::reduce_word(tau);
    return {tau_point<T>(w.reduced), w.matrix};
}

namespace detail {

template <std::floating_point T>
void require_tol(T tol, const char* who) {
    if (!(tol > T(0)) || !std::isfinite(tol)) throw std::invalid_argument(std::string(who) + ": bad tol");
    if (tol < T(1e-15))
        throw precision_loss(std::string(who) + ": tol below the double-precision floor 1e-15");
}

/// Dedekind eta on a reduced point via the pentagonal-number series
/// q^{1/24} * sum_k (-1)^k q^{k(3k-1)/2}; tail certified geometrically.
template <std::floating_point T>
std::complex<T> eta_reduced(std::complex<T> tau, T tol) {
    const T pi = std::numbers::pi_v<T>;
    const std::complex<T> iu(T(0), T(1));
    const std::complex<T> q = std::exp(T(2) * pi * iu * tau);
    const T aq = std::abs(q);
    std::complex<T> sum(T(1), T(0));
    T sign = T(-1);
    for (int k = 1; k < 64; ++k) {
        const T e1 = T(k) * (T(3) * T(k) - T(1)) / T(2);
        const T e2 = T(k) * (T(3) * T(k) + T(1)) / T(2);
        sum += sign * (std::pow(q, e1) + std::pow(q, e2));
        sign = -sign;
        const T tail = T(2) * std::pow(aq, T(k + 1) * (T(3) * T(k + 1) - T(1)) / T(2)) / (T(1) - aq);
        if (tail < tol / T(4)) break;
    }
    return std::exp(T(2) * pi * iu * tau / T(24)) * sum;
}

} // namespace detail

/// Dedekind eta with exact multiplier tracking through the reduction word:
/// eta(tau+1) = e^{i pi/12} eta(tau), eta(-1/tau) = sqrt(-i tau) eta(tau).
template <std::floating_point T>
std::complex<T> eta(const tau_point<T>& tau, T tol = T(1e-12)) {
    detail::require_tol(tol, "eta");
    auto w = detail::reduce_word(tau);
    const T pi = std::numbers::pi_v<T>;
    const std::complex<T> iu(T(0), T(1));
    // factor f with eta(reduced) = f * eta(tau)
    std::complex<T> f(T(1), T(0));
    for (const auto& s : w.steps) {
        if (s.shift != 0) f *= std::exp(iu * pi * static_cast<T>(s.shift) / T(12));
        if (s.invert) f *= std::sqrt(-iu * s.tau_before_invert);
    }
    return detail::eta_reduced(w.reduced, tol) / f;
}

template <std::floating_point T>
struct theta_triple {
    std::complex<T> theta2;
    std::complex<T> theta3;
    std::complex<T> theta4;
};

namespace detail {

template <std::floating_point T>
theta_triple<T> theta_reduced(std::complex<T> tau, T tol) {
    const T pi = std::numbers::pi_v<T>;
    const std::complex<T> iu(T(0), T(1));
    const std::complex<T> p = std::exp(pi * iu * tau);  // nome e^{pi i tau}
    const T ap = std::abs(p);
    std::complex<T> t3(T(1), T(0)), t4(T(1), T(0)), t2sum(T(1), T(0));
    for (int n = 1; n < 64; ++n) {
        const std::complex<T> pn2 = std::pow(p, T(n) * T(n));
        t3 += T(2) * pn2;
        t4 += T(2) * (n % 2 ? -pn2 : pn2);
        t2sum += std::pow(p, T(n) * (T(n) + T(1)));
        const T tail = T(4) * std::pow(ap, T(n + 1) * T(n + 1)) / (T(1) - ap);
        if (tail < tol / T(4)) break;
    }
    return {T(2) * std::pow(p, T(0.25)) * t2sum, t3, t4};
}

} // namespace detail

/// Theta constants (theta2, theta3, theta4) with nome e^{pi i tau}. Evaluated
/// on the reduced point, then the transformation word is unwound exactly:
///   T: (t2,t3,t4)(tau+1) = (e^{i pi/4} t2, t4, t3)(tau)
///   S: (t2,t3,t4)(-1/tau) = sqrt(-i tau) (t4, t3, t2)(tau)
template <std::floating_point T>
theta_triple<T> theta_constants(const tau_point<T>& tau, T tol = T(1e-12)) {
    detail::require_tol(tol, "theta_constants");
    auto w = detail::reduce_word(tau);
    auto th = detail::theta_reduced(w.reduced, tol);
    const T pi = std::numbers::pi_v<T>;
    const std::complex<T> iu(T(0), T(1));
    // walk the word backwards, inverting each step
    for (auto it = w.steps.rbegin(); it != w.steps.rend(); ++it) {
        if (it->invert) {
            const std::complex<T> r = std::sqrt(-iu * it->tau_before_invert);
            theta_triple<T> prev;
            prev.theta4 = th.theta2 / r;
            prev.theta3 = th.theta3 / r;
            prev.theta2 = th.theta4 / r;
            th = prev;
        }
        if (it->shift != 0) {
            const std::int64_t k = it->shift;
            th.theta2 *= std::exp(-iu * pi * static_cast<T>(k) / T(4));
            if (k % 2 != 0) std::swap(th.theta3, th.theta4);
        }
    }
    return th;
}

/// Modular lambda = theta2^4 / theta3^4. For Im tau > 30 the q-expansion
/// leading terms are returned directly to avoid degrading into underflow
/// through the fourth powers.
template <std::floating_point T>
std::complex<T> lambda_function(const tau_point<T>& tau, T tol = T(1e-12)) {
    detail::require_tol(tol, "lambda_function");
    const T pi = std::numbers::pi_v<T>;
    const std::complex<T> iu(T(0), T(1));
    if (tau.im > T(30)) {
        const std::complex<T> p = std::exp(pi * iu * tau.value());
        return T(16) * p * (T(1) - T(8) * p + T(44) * p * p);
    }
    auto th = theta_constants(tau, tol / T(8));
    const std::complex<T> r = th.theta2 / th.theta3;
    const std::complex<T> r2 = r * r;
    return r2 * r2;
}

namespace detail {

/// sigma_k(n) table for n = 1..nmax.
inline std::vector<std::uint64_t> sigma_table(int k, int nmax) {
    std::vector<std::uint64_t> s(static_cast<std::size_t>(nmax) + 1, 0);
    for (int d = 1; d <= nmax; ++d) {
        std::uint64_t dk = 1;
        for (int i = 0; i < k; ++i) dk *= static_cast<std::uint64_t>(d);
        for (int n = d; n <= nmax; n += d) s[static_cast<std::size_t>(n)] += dk;
    }
    return s;
}

/// Normalized Eisenstein series E4 or E6 on a reduced point, certified tail.
template <std::floating_point T, int W>
std::complex<T> eisenstein_q_reduced(std::complex<T> tau, T tol) {
    static_assert(W == 4 || W == 6);
    const T pi = std::numbers::pi_v<T>;
    const std::complex<T> iu(T(0), T(1));
    const std::complex<T> q = std::exp(T(2) * pi * iu * tau);
    const T aq = std::abs(q);
    const T coef = (W == 4) ? T(240) : T(-504);
    const int sk = W - 1;
    const int nmax = 64;
    static const auto s3 = sigma_table(3, nmax);
    static const auto s5 = sigma_table(5, nmax);
    const auto& sig = (W == 4) ? s3 : s5;
    std::complex<T> sum(T(1), T(0));
    std::complex<T> qn(T(1), T(0));
    for (int n = 1; n <= nmax; ++n) {
        qn *= q;
        sum += coef * static_cast<T>(sig[static_cast<std::size_t>(n)]) * qn;
        // crude certified tail: sigma_k(m) <= m^{k+1}, ratio bound geometric
        const T m = T(n + 1);
        const T ratio = aq * std::pow((m + T(1)) / m, T(sk + 1));
        if (ratio < T(1)) {
            const T tail = std::abs(coef) * std::pow(m, T(sk + 1)) * std::pow(aq, m) / (T(1) - ratio);
            if (tail < tol / T(4)) return sum;
        }
    }
    throw convergence_failure("eisenstein_q_reduced: series tail did not certify");
}

/// g2 or g3 anywhere in the upper half-plane through reduction plus the
/// weight-W cocycle (c tau + d)^W.
template <std::floating_point T, int W>
std::complex<T> weierstrass_invariant_q(const tau_point<T>& tau, T tol) {
    auto w = reduce_word(tau);
    const std::complex<T> cd = static_cast<T>(w.matrix[1][0]) * tau.value() +
                               static_cast<T>(w.matrix[1][1]);
    const T pi = std::numbers::pi_v<T>;
    const std::complex<T> norm_const =
        (W == 4) ? std::complex<T>(T(4) * std::pow(pi, T(4)) / T(3), T(0))
                 : std::complex<T>(T(8) * std::pow(pi, T(6)) / T(27), T(0));
    const std::complex<T> cocycle = std::pow(cd, T(W));
    // the series tolerance is in E-units; rescale so the returned g-value is
    // good to tol on its own scale
    const T series_tol =
        std::max(tol * std::abs(cocycle) / std::abs(norm_const), std::numeric_limits<T>::epsilon());
    const auto e = eisenstein_q_reduced<T, W>(w.reduced, series_tol);
    return norm_const * e / cocycle;
}

template <std::floating_point T, int W>
std::complex<T> eisenstein_checked(const tau_point<T>& tau, T tol, const sum_limits& limits) {
    require_tol(tol, "eisenstein");
    const std::complex<T> vq = weierstrass_invariant_q<T, W>(tau, tol);
    const T factor = (W == 4) ? T(60) : T(140);
    const T pi = std::numbers::pi_v<T>;
    const T e_unit = (W == 4) ? T(4) * std::pow(pi, T(4)) / T(3)
                              : T(8) * std::pow(pi, T(6)) / T(27);
    // literal lattice sum over n + m tau with certified power-law tail; the
    // tail target is measured against one E-unit, not against |vq|, so a
    // vanishing invariant (hexagonal g2, square g3) stays reachable
    lattice_basis<T> b{std::complex<T>(T(1), T(0)), tau.value()};
    const T tol_abs = tol * std::max(e_unit, std::abs(vq)) / factor;
    auto [raw, bound] = lattice_power_sum(b, W, tol_abs, limits.lattice_cap);
    const std::complex<T> vl = factor * raw;
    if (std::abs(vl - vq) > tol * (T(1) + std::abs(vq)) + factor * bound * T(2))
        throw convergence_failure("eisenstein: lattice sum and q-expansion disagree");
    return vq;
}

} // namespace detail

/// g2 = 60 sum' (n + m tau)^{-4}, dual-route checked (lattice sum vs
/// q-expansion); returns the q-expansion value.
template <std::floating_point T>
std::complex<T> eisenstein_g2(const tau_point<T>& tau, T tol = T(1e-5),
                              const sum_limits& limits = default_limits()) {
    return detail::eisenstein_checked<T, 4>(tau, tol, limits);
}

/// g3 = 140 sum' (n + m tau)^{-6}, dual-route checked as in eisenstein_g2.
template <std::floating_point T>
std::complex<T> eisenstein_g3(const tau_point<T>& tau, T tol = T(1e-8),
                              const sum_limits& limits = default_limits()) {
    return detail::eisenstein_checked<T, 6>(tau, tol, limits);
}

/// Modular discriminant Delta = g2^3 - 27 g3^2 through the q-expansion path
/// (the path the dual-route Eisenstein check validates).
template <std::floating_point T>
std::complex<T> discriminant_modular(const tau_point<T>& tau, T tol = T(1e-12)) {
    const auto g2 = detail::weierstrass_invariant_q<T, 4>(tau, tol);
    const auto g3 = detail::weierstrass_invariant_q<T, 6>(tau, tol);
    return g2 * g2 * g2 - T(27) * g3 * g3;
}

/// Klein j = 1728 g2^3 / Delta.
template <std::floating_point T>
std::complex<T> j_invariant(const tau_point<T>& tau, T tol = T(1e-12)) {
    const auto g2 = detail::weierstrass_invariant_q<T, 4>(tau, tol);
    const auto g3 = detail::weierstrass_invariant_q<T, 6>(tau, tol);
    const auto g2c = g2 * g2 * g2;
    return T(1728) * g2c / (g2c - T(27) * g3 * g3);
}

/// Algebraic discriminant of y^2 = x(x-1)(x-lambda): ((1-lambda) lambda)^2.
template <std::floating_point T>
std::complex<T> algebraic_discriminant_lambda(std::complex<T> lambda) {
    const std::complex<T> d = (std::complex<T>(T(1), T(0)) - lambda) * lambda;
    return d * d;
}

/// j through the degree-6 covering of the lambda-line:
/// j = 256 (1 - lambda + lambda^2)^3 / (lambda^2 (1 - lambda)^2).
template <std::floating_point T>
std::complex<T> covering_j_from_lambda(std::complex<T> lambda) {
    const std::complex<T> one(T(1), T(0));
    if (lambda == std::complex<T>(T(0), T(0)) || lambda == one)
        throw invalid_lambda("covering_j_from_lambda: lambda at a cusp {0, 1}");
    const std::complex<T> num = one - lambda + lambda * lambda;
    const std::complex<T> den = lambda * (one - lambda);
    return T(256) * num * num * num / (den * den);
}

} // namespace etalab

#endif
