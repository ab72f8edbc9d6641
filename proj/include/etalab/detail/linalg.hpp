#ifndef ETALAB_DETAIL_LINALG_HPP
#define ETALAB_DETAIL_LINALG_HPP

#include <cmath>
#include <concepts>
#include <cstddef>
#include <vector>

#include "../core.hpp"

namespace etalab::detail {

/// Dense column-major least squares via Householder QR, sized for the handful
/// of unknowns used by the fitting routines (n <= 8, m up to a few hundred).
/// Throws singular_fit when a pivot collapses relative to the column scale.
template <std::floating_point T>
std::vector<T> least_squares(std::vector<std::vector<T>> columns, std::vector<T> rhs) {
    const std::size_t n = columns.size();
    const std::size_t m = rhs.size();
    if (n == 0 || m < n) throw singular_fit("least_squares: need at least as many rows as unknowns");
    for (auto& c : columns)
        if (c.size() != m) throw dimension_mismatch("least_squares: ragged design matrix");

    T scale = T(0);
    for (const auto& c : columns)
        for (T v : c) scale = std::max(scale, std::abs(v));
    if (scale == T(0)) throw singular_fit("least_squares: zero design matrix");

    // Householder on the augmented system, reflecting rhs along the way.
    std::vector<T> diag(n);
    for (std::size_t k = 0; k < n; ++k) {
        T norm = T(0);
        for (std::size_t i = k; i < m; ++i) norm = std::hypot(norm, columns[k][i]);
        if (norm <= scale * T(1e4) * std::numeric_limits<T>::epsilon() * static_cast<T>(m))
            throw singular_fit("least_squares: rank-deficient design matrix");
        // norm carries the sign of the pivot head so u[k] = 1 + |a_kk|/|norm|
        // never cancels; the reflected column is then (-norm, 0, ..., 0)
        if (columns[k][k] < T(0)) norm = -norm;
        for (std::size_t i = k; i < m; ++i) columns[k][i] /= norm;
        columns[k][k] += T(1);
        for (std::size_t j = k + 1; j < n; ++j) {
            T s = T(0);
            for (std::size_t i = k; i < m; ++i) s += columns[k][i] * columns[j][i];
            s /= columns[k][k];
            for (std::size_t i = k; i < m; ++i) columns[j][i] -= s * columns[k][i];
        }
        T s = T(0);
        for (std::size_t i = k; i < m; ++i) s += columns[k][i] * rhs[i];
        s /= columns[k][k];
        for (std::size_t i = k; i < m; ++i) rhs[i] -= s * columns[k][i];
        diag[k] = -norm;
    }

    std::vector<T> x(n);
    for (std::size_t kk = n; kk-- > 0;) {
        T s = rhs[kk];
        for (std::size_t j = kk + 1; j < n; ++j) s -= x[j] * columns[j][kk];
        x[kk] = s / diag[kk];
    }
    return x;
}

/// Simple linear regression y = a + b x; returns {a, b, r2, rms_residual}.
template <std::floating_point T>
struct line_fit_result {
    T intercept;
    T slope;
    T r2;
    T rms;
};

template <std::floating_point T>
line_fit_result<T> fit_line(const std::vector<T>& x, const std::vector<T>& y) {
    const std::size_t m = x.size();
    if (m != y.size() || m < 2) throw singular_fit("fit_line: need >= 2 points");
    std::vector<std::vector<T>> cols{std::vector<T>(m, T(1)), x};
    auto ab = least_squares<T>(cols, y);
    T ss_res = T(0), ss_tot = T(0), mean = T(0);
    for (T v : y) mean += v;
    mean /= static_cast<T>(m);
    for (std::size_t i = 0; i < m; ++i) {
        ss_res += sq(y[i] - (ab[0] + ab[1] * x[i]));
        ss_tot += sq(y[i] - mean);
    }
    T r2 = ss_tot > T(0) ? T(1) - ss_res / ss_tot : T(1);
    return {ab[0], ab[1], r2, std::sqrt(ss_res / static_cast<T>(m))};
}

} // namespace etalab::detail

#endif
