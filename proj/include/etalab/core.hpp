#ifndef ETALAB_CORE_HPP
#define ETALAB_CORE_HPP

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace etalab {

/// Base class for every failure the library reports on purpose.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct convergence_failure : error { using error::error; };
struct precision_loss : error { using error::error; };
struct quadrature_failure : error { using error::error; };
struct pole_point : error { using error::error; };
struct invalid_lambda : error { using error::error; };
struct branch_point : error { using error::error; };
struct continuation_failure : error { using error::error; };
struct singular_fit : error { using error::error; };
struct fit_ambiguous : error { using error::error; };
struct dimension_mismatch : error { using error::error; };
struct missing_chern_entry : error { using error::error; };

/// Metric normalization for the flat torus C/(Z + tau Z).
/// induced:     metric |dz|^2, area = Im tau.
/// unit_volume: same metric rescaled so the area is 1 (eigenvalues scale by Im tau).
enum class normalization { induced, unit_volume };

/// A point tau in the upper half-plane. Construction validates Im tau > 0 and finiteness.
template <std::floating_point T>
struct tau_point {
    T re;
    T im;

    tau_point(T re_, T im_) : re(re_), im(im_) {
        if (!std::isfinite(re) || !std::isfinite(im))
            throw std::invalid_argument("tau_point: coordinates must be finite");
        if (!(im > T(0)))
            throw std::invalid_argument("tau_point: Im tau must be positive");
    }
    explicit tau_point(std::complex<T> z) : tau_point(z.real(), z.imag()) {}

    std::complex<T> value() const { return {re, im}; }
};

/// Term caps for lattice and series summation. The soft cap is the working
/// default; requests that would exceed the hard cap always fail.
struct sum_limits {
    static constexpr std::size_t hard_cap = 10000000;
    std::size_t soft_cap = 2000;          // lattice points per heat-trace sum
    std::size_t series_cap = 100000;      // q-series / hypergeometric terms
    std::size_t lattice_cap = hard_cap;   // Eisenstein lattice cross-check points
};

/// Default limits, honoring the ETALAB_MAX_TERMS environment override.
inline sum_limits default_limits() {
    sum_limits lim;
    if (const char* env = std::getenv("ETALAB_MAX_TERMS")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) {
            lim.soft_cap = static_cast<std::size_t>(v);
            lim.series_cap = static_cast<std::size_t>(v);
            lim.lattice_cap = static_cast<std::size_t>(v);
        }
    }
    if (lim.soft_cap > sum_limits::hard_cap) lim.soft_cap = sum_limits::hard_cap;
    if (lim.series_cap > sum_limits::hard_cap) lim.series_cap = sum_limits::hard_cap;
    if (lim.lattice_cap > sum_limits::hard_cap) lim.lattice_cap = sum_limits::hard_cap;
    return lim;
}

namespace detail {

template <class T> constexpr T sq(T x) { return x * x; }

template <std::floating_point T>
bool close_rel(T a, T b, T tol) {
    using std::abs;
    return abs(a - b) <= tol * (T(1) + abs(a) + abs(b));
}

} // namespace detail

} // namespace etalab

#endif
