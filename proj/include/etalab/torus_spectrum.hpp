#ifndef ETALAB_TORUS_SPECTRUM_HPP
#define ETALAB_TORUS_SPECTRUM_HPP

#include <algorithm>
#include <complex>
#include <concepts>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "detail/lattice.hpp"

namespace etalab {

namespace detail {

/// Basis whose point norms^2 are exactly the Laplace eigenvalues
/// lambda_{m,n} = s * 4 pi^2 |m tau - n|^2 / (Im tau)^2, s = Im tau for
/// unit_volume and 1 for induced.
template <std::floating_point T>
lattice_basis<T> eigenvalue_basis(const tau_point<T>& tau, normalization norm) {
    const T pi = std::numbers::pi_v<T>;
    const T scale = (norm == normalization::unit_volume) ? tau.im : T(1);
    const T f = T(2) * pi * std::sqrt(scale) / tau.im;
    return {std::complex<T>(tau.re * f, tau.im * f), std::complex<T>(-f, T(0))};
}

/// Period lattice of the normalized metric; covolume equals the area.
template <std::floating_point T>
lattice_basis<T> period_basis(const tau_point<T>& tau, normalization norm) {
    const T r = (norm == normalization::unit_volume) ? T(1) / std::sqrt(tau.im) : T(1);
    return {std::complex<T>(r, T(0)), std::complex<T>(tau.re * r, tau.im * r)};
}

template <std::floating_point T>
T torus_area(const tau_point<T>& tau, normalization norm) {
    return (norm == normalization::unit_volume) ? T(1) : tau.im;
}

} // namespace detail

/// First `count` Laplace eigenvalues of the flat torus C/(Z + tau Z),
/// ascending, with multiplicity, including the zero mode.
template <std::floating_point T>
std::vector<T> eigenvalues(const tau_point<T>& tau, normalization norm, std::size_t count) {
    if (count == 0) throw std::invalid_argument("eigenvalues: count must be positive");
    std::vector<T> out;
    out.push_back(T(0));
    if (count == 1) return out;

    const auto basis = detail::eigenvalue_basis(tau, norm);
    const T covol = basis.covolume();
    const T lmin = detail::shortest_vector_length(basis);
    const T pi = std::numbers::pi_v<T>;
    T radius = std::sqrt(static_cast<T>(count + 8) * covol / pi) + T(2) * lmin;
    for (int attempt = 0; attempt < 48; ++attempt) {
        auto pts = detail::points_in_disc(basis, radius, sum_limits::hard_cap);
        if (pts.size() >= count - 1) {
            for (std::size_t i = 0; i + 1 < count; ++i) out.push_back(pts[i].norm2);
            return out;
        }
        radius *= T(1.5);
    }
    throw convergence_failure("eigenvalues: enumeration radius grew without finding enough points");
}

/// Heat trace Theta(t) = sum over the full spectrum of exp(-t lambda),
/// zero mode included, by direct truncated summation with a certified
/// Gaussian tail bound <= tol.
template <std::floating_point T>
T heat_trace_direct(const tau_point<T>& tau, normalization norm, T t, T tol = T(1e-12),
                    const sum_limits& limits = default_limits()) {
    if (!(t > T(0)) || !std::isfinite(t)) throw std::invalid_argument("heat_trace_direct: t must be positive");
    if (!(tol > T(0))) throw std::invalid_argument("heat_trace_direct: tol must be positive");
    auto [sum, bound] = detail::lattice_gauss_sum(detail::eigenvalue_basis(tau, norm), t, tol,
                                                  limits.soft_cap);
    (void)bound;
    return T(1) + sum;
}

/// Heat trace through the dual (Poisson-resummed) representation
/// Theta(t) = Area/(4 pi t) * sum_{v in period lattice} exp(-|v|^2 / 4t).
template <std::floating_point T>
T heat_trace_poisson(const tau_point<T>& tau, normalization norm, T t, T tol = T(1e-12),
                     const sum_limits& limits = default_limits()) {
    if (!(t > T(0)) || !std::isfinite(t)) throw std::invalid_argument("heat_trace_poisson: t must be positive");
    if (!(tol > T(0))) throw std::invalid_argument("heat_trace_poisson: tol must be positive");
    const T pi = std::numbers::pi_v<T>;
    const T area = detail::torus_area(tau, norm);
    const T pref = area / (T(4) * pi * t);
    auto [sum, bound] = detail::lattice_gauss_sum(detail::period_basis(tau, norm), T(1) / (T(4) * t),
                                                  tol / pref, limits.soft_cap);
    (void)bound;
    return pref * (T(1) + sum);
}

/// Crossover dispatcher: Poisson below t* = Area/(4 pi), direct above.
/// Falls back to the other representation if the preferred one cannot
/// certify its tail under the term cap.
template <std::floating_point T>
T heat_trace(const tau_point<T>& tau, normalization norm, T t, T tol = T(1e-12),
             const sum_limits& limits = default_limits()) {
    const T pi = std::numbers::pi_v<T>;
    const bool poisson_first = t < detail::torus_area(tau, norm) / (T(4) * pi);
    try {
        return poisson_first ? heat_trace_poisson(tau, norm, t, tol, limits)
                             : heat_trace_direct(tau, norm, t, tol, limits);
    } catch (const convergence_failure&) {
        return poisson_first ? heat_trace_direct(tau, norm, t, tol, limits)
                             : heat_trace_poisson(tau, norm, t, tol, limits);
    }
}

/// A heat trace as data: evaluate(t, tol) -> {value, certified error bound}.
/// decay_rate is the first positive eigenvalue (0 when unknown); large-t tail
/// bounds lean on it.
template <std::floating_point T>
struct trace_function {
    std::function<std::pair<T, T>(T, T)> evaluate;
    std::string descriptor;
    T decay_rate = T(0);
};

/// The torus heat trace packaged as a trace_function (zero mode included).
template <std::floating_point T>
trace_function<T> make_torus_trace(const tau_point<T>& tau, normalization norm,
                                   const sum_limits& limits = default_limits()) {
    const T lmin = detail::shortest_vector_length(detail::eigenvalue_basis(tau, norm));
    return {[tau, norm, limits](T t, T tol) {
                return std::pair<T, T>(heat_trace(tau, norm, t, tol, limits), tol);
            },
            std::string("torus heat trace"), lmin * lmin};
}

/// Finite-spectrum trace sum_i exp(-lambda_i t); zero eigenvalues contribute
/// the zero modes. Exact up to rounding, so the reported bound is epsilon-level.
template <std::floating_point T>
trace_function<T> make_spectrum_trace(std::vector<T> eigenvalues_list) {
    for (T l : eigenvalues_list)
        if (!(l >= T(0)) || !std::isfinite(l))
            throw std::invalid_argument("make_spectrum_trace: eigenvalues must be finite and >= 0");
    std::sort(eigenvalues_list.begin(), eigenvalues_list.end());
    T first_positive = T(0);
    for (T l : eigenvalues_list)
        if (l > T(0)) { first_positive = l; break; }
    return {[eig = std::move(eigenvalues_list)](T t, T) {
                T s = T(0);
                for (auto it = eig.rbegin(); it != eig.rend(); ++it) s += std::exp(-*it * t);
                return std::pair<T, T>(s, static_cast<T>(eig.size()) *
                                              std::numeric_limits<T>::epsilon());
            },
            std::string("finite spectrum trace"), first_positive};
}

} // namespace etalab

#endif
