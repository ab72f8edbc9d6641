#ifndef ETALAB_CY_COEFFICIENTS_HPP
#define ETALAB_CY_COEFFICIENTS_HPP

#include <cmath>
#include <concepts>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core.hpp"
#include "spectral_zeta.hpp"
#include "torus_spectrum.hpp"

namespace etalab {

/// Chern-number inputs for a polarized manifold of complex dimension n.
/// l_top = integral of L^n, c2_l = integral of c_2 wedge L^{n-2}; `higher`
/// optionally supplies integral of c_{n-k} wedge L^k keyed by k.
template <std::floating_point T>
struct chern_data {
    int n;
    T l_top;
    T c2_l;
    std::map<int, T> higher;

    chern_data(int n_, T l_top_, T c2_l_, std::map<int, T> higher_ = {}, bool allow_zero = false)
        : n(n_), l_top(l_top_), c2_l(c2_l_), higher(std::move(higher_)) {
        if (n < 1) throw std::invalid_argument("chern_data: dimension must be >= 1");
        if (!allow_zero && !(l_top > T(0)))
            throw std::invalid_argument("chern_data: L_top must be positive for a polarization");
        if (!std::isfinite(l_top) || !std::isfinite(c2_l))
            throw std::invalid_argument("chern_data: entries must be finite");
    }
};

/// Integrated curvature quantities; numbers, not tensors. The three norms are
/// nonnegative, the integrated Laplacian of scalar curvature may have any sign.
template <std::floating_point T>
struct curvature_inputs {
    T ric_norm2;
    T r_norm2;
    T scalar_sq_int;
    T laplacian_scalar_int;
    T c2_wedge;

    curvature_inputs(T ric, T riem, T scal_sq, T lap_scal, T c2w)
        : ric_norm2(ric), r_norm2(riem), scalar_sq_int(scal_sq),
          laplacian_scalar_int(lap_scal), c2_wedge(c2w) {
        if (ric < T(0) || riem < T(0) || scal_sq < T(0))
            throw std::invalid_argument("curvature_inputs: squared norms must be nonnegative");
    }
};

/// a_{-1} = ( -12 int Delta k + 5 |Ric|^2 - 2 |R|^2 ) / (1440 pi).
/// Ricci-flat inputs reduce this to -|R|^2 / (720 pi).
template <std::floating_point T>
T gilkey_a_minus1(const curvature_inputs<T>& in) {
    const T pi = std::numbers::pi_v<T>;
    return (T(-12) * in.laplacian_scalar_int + T(5) * in.ric_norm2 - T(2) * in.r_norm2) /
           (T(1440) * pi);
}

/// Residual of 2|Ric|^2 - |R|^2 - int k^2 = -int c_2 wedge omega^{n-2};
/// zero for admissible synthetic data.
template <std::floating_point T>
T calabi_identity_residual(const curvature_inputs<T>& in) {
    return T(2) * in.ric_norm2 - in.r_norm2 - in.scalar_sq_int + in.c2_wedge;
}

/// Heat coefficients of a polarized CY threefold, keyed by k in a_{-k}:
/// a_{-3} = L_top/(4 pi), a_{-2} = 0 exactly, a_{-1} = -c2_L/(720 pi).
template <std::floating_point T>
std::map<int, T> cy3_heat_coefficients(const chern_data<T>& chern) {
    if (chern.n != 3)
        throw dimension_mismatch("cy3_heat_coefficients: requires complex dimension 3");
    const T pi = std::numbers::pi_v<T>;
    return {{3, chern.l_top / (T(4) * pi)}, {2, T(0)}, {1, -chern.c2_l / (T(720) * pi)}};
}

/// a_{-k} = b_k * (integral of c_{n-k} wedge L^k) for each supplied b_k.
/// The k = n and k = n-2 integrals fall back to l_top and c2_l when the
/// `higher` map has no entry; anything else must be supplied explicitly.
template <std::floating_point T>
std::map<int, T> conjectured_coefficients(const chern_data<T>& chern,
                                          const std::map<int, T>& b_constants) {
    std::map<int, T> out;
    for (const auto& [k, b] : b_constants) {
        T chern_integral;
        if (auto it = chern.higher.find(k); it != chern.higher.end()) {
            chern_integral = it->second;
        } else if (k == chern.n) {
            chern_integral = chern.l_top;
        } else if (k == chern.n - 2) {
            chern_integral = chern.c2_l;
        } else {
            throw missing_chern_entry("conjectured_coefficients: no Chern integral for k = " +
                                      std::to_string(k));
        }
        out[k] = b * chern_integral;
    }
    return out;
}

/// The constant block gamma a_0 - sum_{k>=1} a_{-k}/k entering b_1. The
/// expansion describes the zero-mode-free trace, so a_0 is used as stored.
template <std::floating_point T>
T mellin_constant_block(const asymptotic_expansion<T>& expansion) {
    if (expansion.coefficients.empty())
        throw std::invalid_argument("mellin_constant_block: empty expansion");
    T block = std::numbers::egamma_v<T> * expansion.coefficients[0];
    for (std::size_t k = 1; k < expansion.coefficients.size(); ++k)
        block -= expansion.coefficients[k] / static_cast<T>(k);
    return block;
}

/// Regularized-determinant assembly for an externally supplied trace: the
/// same Mellin split used for the torus, so file-loaded spectra and synthetic
/// traces flow through one code path. det = exp(-b_1).
template <std::floating_point T>
zeta_result<T> b1_from_trace(const trace_function<T>& trace,
                             const asymptotic_expansion<T>& expansion, int zero_modes,
                             T tol = T(1e-10)) {
    return mellin_b_coefficients(trace, expansion, zero_modes, tol);
}

/// One eigenvalue per line; blank lines and '#' comments skipped.
template <std::floating_point T>
std::vector<T> load_eigenvalues(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_eigenvalues: cannot open " + path);
    std::vector<T> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        T v;
        if (ls >> v) {
            std::string rest;
            if (ls >> rest)
                throw std::runtime_error("load_eigenvalues: trailing junk on line " +
                                         std::to_string(lineno));
            values.push_back(v);
        } else if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) {
            throw std::runtime_error("load_eigenvalues: unparsable line " + std::to_string(lineno));
        }
    }
    return values;
}

template <std::floating_point T>
void save_eigenvalues(const std::string& path, const std::vector<T>& values) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_eigenvalues: cannot open " + path);
    out.precision(17);
    for (T v : values) out << v << '\n';
}

/// JSON document form: {"n": int, "L_top": number, "c2_L": number,
/// "higher": {"k": number, ...}} with `higher` optional.
template <std::floating_point T>
chern_data<T> chern_from_json(const std::string& text, bool allow_zero = false) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("chern_from_json: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("L_top") || !doc.contains("c2_L"))
        throw std::runtime_error("chern_from_json: need object with n, L_top, c2_L");
    std::map<int, T> higher;
    if (doc.contains("higher")) {
        for (const auto& [key, value] : doc["higher"].items())
            higher[std::stoi(key)] = static_cast<T>(value.template get<double>());
    }
    return chern_data<T>(doc["n"].template get<int>(),
                         static_cast<T>(doc["L_top"].template get<double>()),
                         static_cast<T>(doc["c2_L"].template get<double>()), std::move(higher),
                         allow_zero);
}

template <std::floating_point T>
std::string chern_to_json(const chern_data<T>& chern) {
    nlohmann::ordered_json doc;
    doc["n"] = chern.n;
    doc["L_top"] = chern.l_top;
    doc["c2_L"] = chern.c2_l;
    if (!chern.higher.empty()) {
        nlohmann::ordered_json h;
        for (const auto& [k, v] : chern.higher) h[std::to_string(k)] = v;
        doc["higher"] = h;
    }
    return doc.dump();
}

} // namespace etalab

#endif
