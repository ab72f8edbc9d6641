#ifndef ETALAB_DETAIL_LATTICE_HPP
#define ETALAB_DETAIL_LATTICE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <vector>

#include "../core.hpp"

namespace etalab::detail {

template <std::floating_point T>
struct lattice_point {
    T norm2;
    std::int64_t m;
    std::int64_t n;
};

template <std::floating_point T>
struct lattice_basis {
    std::complex<T> b1;
    std::complex<T> b2;

    T covolume() const {
        return std::abs(b1.real() * b2.imag() - b1.imag() * b2.real());
    }
};

/// Lagrange-Gauss reduction; afterwards |b1| is the shortest vector length.
template <std::floating_point T>
lattice_basis<T> gauss_reduce(lattice_basis<T> b) {
    using std::norm;
    for (int iter = 0; iter < 64; ++iter) {
        if (norm(b.b2) < norm(b.b1)) std::swap(b.b1, b.b2);
        T mu = std::round((b.b2.real() * b.b1.real() + b.b2.imag() * b.b1.imag()) / norm(b.b1));
        if (mu == T(0)) break;
        b.b2 -= mu * b.b1;
    }
    if (std::norm(b.b2) < std::norm(b.b1)) std::swap(b.b1, b.b2);
    return b;
}

template <std::floating_point T>
T shortest_vector_length(const lattice_basis<T>& b) {
    return std::abs(gauss_reduce(b).b1);
}

/// All nonzero lattice points with |m b1 + n b2| <= radius, sorted by
/// (norm^2, m, n). The fixed order makes downstream sums bitwise reproducible.
template <std::floating_point T>
std::vector<lattice_point<T>> points_in_disc(const lattice_basis<T>& b, T radius,
                                             std::size_t max_points) {
    const T g11 = std::norm(b.b1);
    const T g22 = std::norm(b.b2);
    const T g12 = b.b1.real() * b.b2.real() + b.b1.imag() * b.b2.imag();
    const T det = g11 * g22 - g12 * g12;
    if (!(det > T(0))) throw std::invalid_argument("points_in_disc: degenerate basis");
    const T r2 = radius * radius;

    // crude count estimate up front so absurd requests fail fast
    const T covol = std::sqrt(det);
    const T est = T(3.2) * (radius + std::abs(b.b1) + std::abs(b.b2)) *
                      (radius + std::abs(b.b1) + std::abs(b.b2)) / covol;
    if (est > T(2) * static_cast<T>(sum_limits::hard_cap))
        throw convergence_failure("points_in_disc: required cutoff exceeds the hard cap");

    std::vector<lattice_point<T>> pts;
    const auto mmax = static_cast<std::int64_t>(std::floor(radius * std::sqrt(g22 / det))) + 1;
    for (std::int64_t m = -mmax; m <= mmax; ++m) {
        const T disc = static_cast<T>(m) * static_cast<T>(m) * (g12 * g12 - g11 * g22) + g22 * r2;
        if (disc < T(0)) continue;
        const T root = std::sqrt(disc);
        const T center = -static_cast<T>(m) * g12 / g22;
        auto nlo = static_cast<std::int64_t>(std::ceil(center - root / g22 - T(1)));
        auto nhi = static_cast<std::int64_t>(std::floor(center + root / g22 + T(1)));
        for (std::int64_t n = nlo; n <= nhi; ++n) {
            if (m == 0 && n == 0) continue;
            const T norm2 = static_cast<T>(m) * static_cast<T>(m) * g11 +
                            T(2) * static_cast<T>(m) * static_cast<T>(n) * g12 +
                            static_cast<T>(n) * static_cast<T>(n) * g22;
            if (norm2 <= r2) {
                pts.push_back({norm2, m, n});
                if (pts.size() > max_points)
                    throw convergence_failure(
                        "points_in_disc: required cutoff exceeds the configured maximum");
            }
        }
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& c) {
        if (a.norm2 != c.norm2) return a.norm2 < c.norm2;
        if (a.m != c.m) return a.m < c.m;
        return a.n < c.n;
    });
    return pts;
}

/// Radius R with a certified bound sum_{|v|>R} exp(-c |v|^2) <= tol_abs,
/// via disjoint packing discs of radius lmin/2 compared against the radial
/// Gaussian integral. Returns {R, K} where the tail bound at radius R is
/// K * exp(-c * max(0, R - lmin)^2).
template <std::floating_point T>
std::pair<T, T> gauss_tail_radius(T c, T covol, T lmin, T tol_abs) {
    const T pi = std::numbers::pi_v<T>;
    const T r0 = lmin / T(2);
    (void)covol;
    // bound(R) = K exp(-c u0^2), u0 = max(0, R - 2 r0) = max(0, R - lmin)
    const T k = (T(1) / c + r0 * std::sqrt(pi / c)) / (r0 * r0);
    T u0 = T(0);
    if (k > tol_abs) u0 = std::sqrt(std::log(k / tol_abs) / c);
    return {u0 + T(2) * r0, k};
}

/// Certified sum_{v in L \ 0} exp(-c |v|^2); returns {value, tail_bound}.
/// Terms are accumulated smallest-first in the fixed by-norm order.
template <std::floating_point T>
std::pair<T, T> lattice_gauss_sum(const lattice_basis<T>& b, T c, T tol_abs,
                                  std::size_t max_points) {
    const T lmin = shortest_vector_length(b);
    auto [radius, k] = gauss_tail_radius(c, b.covolume(), lmin, tol_abs);
    auto pts = points_in_disc(b, radius, max_points);
    T sum = T(0);
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) sum += std::exp(-c * it->norm2);
    const T u0 = std::max(T(0), radius - lmin);
    return {sum, k * std::exp(-c * u0 * u0)};
}

/// Certified sum'_{v} (m b1 + n b2)^{-p} for even p >= 4; returns {value, tail_bound}.
template <std::floating_point T>
std::pair<std::complex<T>, T> lattice_power_sum(const lattice_basis<T>& b, int p, T tol_abs,
                                                std::size_t max_points) {
    if (p < 3) throw std::invalid_argument("lattice_power_sum: exponent too small for convergence");
    const T lmin = shortest_vector_length(b);
    const T r0 = lmin / T(2);
    // tail(R) <= (2/r0^2) [ u0^{2-p}/(p-2) + r0 u0^{1-p}/(p-1) ], u0 = R - 2 r0
    auto tail_at = [&](T u0) {
        return (T(2) / (r0 * r0)) * (std::pow(u0, T(2 - p)) / T(p - 2) +
                                     r0 * std::pow(u0, T(1 - p)) / T(p - 1));
    };
    T u0 = std::max(lmin, T(1));
    while (tail_at(u0) > tol_abs) {
        u0 *= T(1.4142135623730951);
        if (u0 > T(1e9)) throw convergence_failure("lattice_power_sum: tail bound cannot reach tol");
    }
    // shrink back toward the crossing to avoid gross overshoot
    while (u0 > lmin && tail_at(u0 / T(1.05)) <= tol_abs) u0 /= T(1.05);

    const T radius = u0 + T(2) * r0;
    const T covol = b.covolume();
    const T pi = std::numbers::pi_v<T>;
    const T est = pi * radius * radius / covol;
    if (est > static_cast<T>(max_points))
        throw convergence_failure("lattice_power_sum: tail bound cannot reach tol within the term cap");

    auto pts = points_in_disc(b, radius, max_points);
    std::complex<T> sum{};
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        const std::complex<T> v = static_cast<T>(it->m) * b.b1 + static_cast<T>(it->n) * b.b2;
        sum += std::pow(v, -p);
    }
    return {sum, tail_at(u0)};
}

} // namespace etalab::detail

#endif
