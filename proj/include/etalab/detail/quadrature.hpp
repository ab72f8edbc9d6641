#ifndef ETALAB_DETAIL_QUADRATURE_HPP
#define ETALAB_DETAIL_QUADRATURE_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <concepts>

#include "../core.hpp"

namespace etalab::detail {

/// Adaptive Gauss-Kronrod on [a, b]. Succeeds when the error estimate meets
/// either the relative or the absolute tolerance; throws quadrature_failure
/// otherwise. Interior nodes only, so integrable endpoint behavior is fine.
template <std::floating_point T, class F>
T integrate(F&& f, T a, T b, T tol_rel, T tol_abs, unsigned max_depth = 15) {
    T err = T(0);
    T value = boost::math::quadrature::gauss_kronrod<T, 15>::integrate(
        std::forward<F>(f), a, b, max_depth, tol_rel, &err);
    if (!(err <= tol_abs || err <= std::abs(value) * tol_rel * T(4)))
        throw quadrature_failure("integrate: error estimate above requested tolerance");
    return value;
}

} // namespace etalab::detail

#endif
