#ifndef ETALAB_CLI_HPP
#define ETALAB_CLI_HPP

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "cy_coefficients.hpp"
#include "degeneration.hpp"
#include "discriminant_lab.hpp"
#include "modular_forms.hpp"
#include "spectral_zeta.hpp"
#include "torus_spectrum.hpp"

namespace etalab::cli {

enum class command_kind {
    eta, eisenstein, discriminant, j, lambda, spectrum, heat_trace, zeta, det,
    kronecker, fit_exponents, periods, monodromy, growth, cy_coeffs, b1, scan_a0
};

enum class output_format { json, csv };

struct command_spec {
    command_kind subcommand = command_kind::eta;
    std::map<std::string, std::string> params;
    output_format output = output_format::json;
    double tol = 1e-10;
    bool tol_explicit = false;
    normalization norm = normalization::induced;
};

/// exit code 2: unknown subcommand/flag or structural misuse
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// exit code 3: malformed numeric literal
struct literal_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double parse_real_literal(const std::string& t, const std::string& raw) {
    if (t.empty()) throw literal_error("malformed numeric literal: '" + raw + "'");
    const char* b = t.c_str();
    char* e = nullptr;
    errno = 0;
    const double v = std::strtod(b, &e);
    if (e != b + t.size() || !std::isfinite(v))
        throw literal_error("malformed numeric literal: '" + raw + "'");
    return v;
}

inline long long parse_int_literal(const std::string& t) {
    if (t.empty()) throw literal_error("malformed integer literal");
    char* e = nullptr;
    errno = 0;
    const long long v = std::strtoll(t.c_str(), &e, 10);
    if (e != t.c_str() + t.size() || errno == ERANGE)
        throw literal_error("malformed integer literal: '" + t + "'");
    return v;
}

/// "a+bi" literals: "i", "2i", "0.5+2.0i", "3-0.2i", "1e-3i", plain reals.
inline std::complex<double> parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw literal_error("empty complex literal");
    if (s.back() != 'i') return {parse_real_literal(s, raw), 0.0};
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t p = body.size(); p-- > 1;) {
        const char c = body[p];
        if ((c == '+' || c == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    auto imag_of = [&](const std::string& im) -> double {
        if (im.empty() || im == "+") return 1.0;
        if (im == "-") return -1.0;
        return parse_real_literal(im, raw);
    };
    if (split == std::string::npos) return {0.0, imag_of(body)};
    return {parse_real_literal(body.substr(0, split), raw), imag_of(body.substr(split))};
}

namespace detail_cli {

inline const std::map<std::string, command_kind>& command_names() {
    static const std::map<std::string, command_kind> m{
        {"eta", command_kind::eta},
        {"eisenstein", command_kind::eisenstein},
        {"discriminant", command_kind::discriminant},
        {"j", command_kind::j},
        {"lambda", command_kind::lambda},
        {"spectrum", command_kind::spectrum},
        {"heat-trace", command_kind::heat_trace},
        {"zeta", command_kind::zeta},
        {"det", command_kind::det},
        {"kronecker", command_kind::kronecker},
        {"fit-exponents", command_kind::fit_exponents},
        {"periods", command_kind::periods},
        {"monodromy", command_kind::monodromy},
        {"growth", command_kind::growth},
        {"cy-coeffs", command_kind::cy_coeffs},
        {"b1", command_kind::b1},
        {"scan-a0", command_kind::scan_a0}};
    return m;
}

/// flags taking a value, per subcommand (booleans listed separately)
inline const std::set<std::string>& value_flags(command_kind k) {
    static const std::set<std::string> common{"--output", "--tol", "--normalization"};
    auto with = [](std::initializer_list<const char*> extra) {
        std::set<std::string> s = common;
        for (const char* e : extra) s.insert(e);
        return s;
    };
    static const std::map<command_kind, std::set<std::string>> m{
        {command_kind::eta, with({"--tau", "--grid"})},
        {command_kind::eisenstein, with({"--tau"})},
        {command_kind::discriminant, with({"--tau", "--grid", "--h"})},
        {command_kind::j, with({"--tau", "--grid", "--from-lambda"})},
        {command_kind::lambda, with({"--tau", "--grid"})},
        {command_kind::spectrum, with({"--tau", "--count"})},
        {command_kind::heat_trace, with({"--tau", "--t", "--t-grid"})},
        {command_kind::zeta, with({"--tau", "--s"})},
        {command_kind::det, with({"--tau", "--grid", "--method"})},
        {command_kind::kronecker, with({"--tau", "--grid"})},
        {command_kind::fit_exponents, with({"--grid"})},
        {command_kind::periods, with({"--lambda", "--s", "--winding"})},
        {command_kind::monodromy, with({"--cusp", "--basepoint", "--steps"})},
        {command_kind::growth, with({"--family", "--radii"})},
        {command_kind::cy_coeffs, with({"--input", "--chern", "--b-constants", "--curvature"})},
        {command_kind::b1, with({"--tau", "--eigenvalues"})},
        {command_kind::scan_a0, with({"--tau", "--grid"})}};
    return m.at(k);
}

inline const std::set<std::string>& bool_flags(command_kind k) {
    static const std::set<std::string> none{};
    static const std::map<command_kind, std::set<std::string>> m{
        {command_kind::eta, {"--log-im"}},
        {command_kind::discriminant, {"--log-im", "--wp"}},
        {command_kind::j, {"--log-im"}},
        {command_kind::lambda, {"--log-im", "--thetas"}},
        {command_kind::det, {"--log-im"}},
        {command_kind::kronecker, {"--log-im"}},
        {command_kind::fit_exponents, {"--log-im"}},
        {command_kind::cy_coeffs, {"--allow-zero"}},
        {command_kind::scan_a0, {"--log-im"}}};
    auto it = m.find(k);
    return it == m.end() ? none : it->second;
}

} // namespace detail_cli

inline std::string usage_text() {
    return "usage: etalab <subcommand> [flags]\n"
           "subcommands:\n"
           "  eta           --tau a+bi | --grid SPEC [--log-im]\n"
           "  eisenstein    --tau a+bi\n"
           "  discriminant  --tau a+bi | --grid SPEC [--wp] [--h X]\n"
           "  j             --tau a+bi | --from-lambda a+bi | --grid SPEC\n"
           "  lambda        --tau a+bi | --grid SPEC [--thetas]\n"
           "  spectrum      --tau a+bi [--count N]\n"
           "  heat-trace    --tau a+bi (--t X | --t-grid lo:hi:n)\n"
           "  zeta          --tau a+bi --s a+bi\n"
           "  det           --tau a+bi | --grid SPEC [--method mellin|epstein|both]\n"
           "  kronecker     --tau a+bi | --grid SPEC|default\n"
           "  fit-exponents --grid SPEC|default\n"
           "  periods       --lambda a+bi | --s a+bi [--winding K]\n"
           "  monodromy     --cusp 0|1|inf|none [--basepoint a+bi] [--steps N]\n"
           "  growth        --family legendre|equianharmonic [--radii hi:lo:n]\n"
           "  cy-coeffs     --input FILE | --chern JSON [--b-constants k:v,..]\n"
           "                [--curvature ric,r,scal,lap,c2w] [--allow-zero]\n"
           "  b1            --tau a+bi | --eigenvalues FILE\n"
           "  scan-a0       --tau a+bi | --grid SPEC\n"
           "common flags: --output json|csv  --tol X  --normalization induced|unit-volume\n"
           "grid SPEC: re0:re1:n,im0:im1:m (Im log-spaced with --log-im)\n";
}

inline command_spec parse(const std::vector<std::string>& argv) {
    if (argv.empty()) throw usage_error("missing subcommand");
    const auto& names = detail_cli::command_names();
    const auto it = names.find(argv[0]);
    if (it == names.end()) throw usage_error("unknown subcommand '" + argv[0] + "'");
    command_spec spec;
    spec.subcommand = it->second;
    const auto& vflags = detail_cli::value_flags(spec.subcommand);
    const auto& bflags = detail_cli::bool_flags(spec.subcommand);
    for (std::size_t i = 1; i < argv.size(); ++i) {
        const std::string& flag = argv[i];
        if (bflags.count(flag)) {
            spec.params[flag.substr(2)] = "1";
            continue;
        }
        if (!vflags.count(flag)) throw usage_error("unknown flag '" + flag + "'");
        if (i + 1 >= argv.size()) throw usage_error("flag '" + flag + "' needs a value");
        const std::string value = argv[++i];
        if (flag == "--output") {
            if (value == "json") spec.output = output_format::json;
            else if (value == "csv") spec.output = output_format::csv;
            else throw usage_error("--output must be json or csv");
        } else if (flag == "--tol") {
            spec.tol = parse_real_literal(value, value);
            if (!(spec.tol > 0)) throw usage_error("--tol must be positive");
            spec.tol_explicit = true;
        } else if (flag == "--normalization") {
            if (value == "induced") spec.norm = normalization::induced;
            else if (value == "unit-volume") spec.norm = normalization::unit_volume;
            else throw usage_error("--normalization must be induced or unit-volume");
        } else {
            spec.params[flag.substr(2)] = value;
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------
// deterministic document model: numbers preformatted with %.17g
// ---------------------------------------------------------------------------

struct jnode {
    enum class kind { object, array, number, string, boolean, integer };
    kind k = kind::object;
    std::vector<std::pair<std::string, jnode>> members;  // object
    std::vector<jnode> items;                            // array
    std::string scalar;                                  // preformatted leaf
};

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline jnode jnum(double v) { return {jnode::kind::number, {}, {}, fmt17(v)}; }
inline jnode jint(long long v) { return {jnode::kind::integer, {}, {}, std::to_string(v)}; }
inline jnode jstr(std::string s) { return {jnode::kind::string, {}, {}, std::move(s)}; }
inline jnode jbool(bool b) { return {jnode::kind::boolean, {}, {}, b ? "true" : "false"}; }
inline jnode jobj() { return {jnode::kind::object, {}, {}, {}}; }
inline jnode jarr() { return {jnode::kind::array, {}, {}, {}}; }

inline void put(jnode& o, const std::string& key, jnode v) {
    o.members.emplace_back(key, std::move(v));
}

inline void emit_json(const jnode& n, std::ostream& out, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad1(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (n.k) {
        case jnode::kind::object: {
            if (n.members.empty()) { out << "{}"; return; }
            out << "{\n";
            for (std::size_t i = 0; i < n.members.size(); ++i) {
                out << pad1 << '"' << n.members[i].first << "\": ";
                emit_json(n.members[i].second, out, indent + 1);
                out << (i + 1 < n.members.size() ? ",\n" : "\n");
            }
            out << pad << '}';
            return;
        }
        case jnode::kind::array: {
            if (n.items.empty()) { out << "[]"; return; }
            out << "[\n";
            for (std::size_t i = 0; i < n.items.size(); ++i) {
                out << pad1;
                emit_json(n.items[i], out, indent + 1);
                out << (i + 1 < n.items.size() ? ",\n" : "\n");
            }
            out << pad << ']';
            return;
        }
        case jnode::kind::string: out << '"' << n.scalar << '"'; return;
        default: out << n.scalar; return;
    }
}

inline void flatten_row(const jnode& o, const std::string& prefix,
                        std::vector<std::pair<std::string, std::string>>& cells) {
    for (const auto& [key, value] : o.members) {
        if (value.k == jnode::kind::object) flatten_row(value, prefix + key + "_", cells);
        else if (value.k != jnode::kind::array) cells.emplace_back(prefix + key, value.scalar);
    }
}

inline void emit_csv(const jnode& doc, std::ostream& out) {
    const std::vector<jnode>* rows = nullptr;
    std::vector<jnode> single;
    if (doc.k == jnode::kind::array) {
        rows = &doc.items;
    } else {
        single.push_back(doc);
        rows = &single;
    }
    bool header_done = false;
    for (const auto& row : *rows) {
        std::vector<std::pair<std::string, std::string>> cells;
        flatten_row(row, "", cells);
        if (!header_done) {
            for (std::size_t i = 0; i < cells.size(); ++i)
                out << cells[i].first << (i + 1 < cells.size() ? "," : "\n");
            header_done = true;
        }
        for (std::size_t i = 0; i < cells.size(); ++i)
            out << cells[i].second << (i + 1 < cells.size() ? "," : "\n");
    }
}

// ---------------------------------------------------------------------------
// parameter helpers
// ---------------------------------------------------------------------------

namespace detail_cli {

inline std::string require_param(const command_spec& spec, const std::string& key) {
    const auto it = spec.params.find(key);
    if (it == spec.params.end()) throw usage_error("missing required flag '--" + key + "'");
    return it->second;
}

inline bool has(const command_spec& spec, const std::string& key) {
    return spec.params.count(key) != 0;
}

inline tau_point<double> tau_of(const command_spec& spec) {
    const auto c = parse_complex(require_param(spec, "tau"));
    return tau_point<double>(c);
}

/// "re0:re1:n,im0:im1:m" (or the documented named grid "default");
/// rows ordered re-major, then im
inline std::vector<tau_point<double>> parse_grid(std::string text, bool log_im) {
    if (text == "default") text = "-0.4:0.4:5,0.6:2.6:5";
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw usage_error("grid needs 're0:re1:n,im0:im1:m'");
    auto axis = [](const std::string& part) {
        std::vector<std::string> f;
        std::string cur;
        for (char c : part) {
            if (c == ':') { f.push_back(cur); cur.clear(); }
            else cur += c;
        }
        f.push_back(cur);
        if (f.size() != 3) throw usage_error("grid axis needs 'lo:hi:n'");
        const double lo = parse_real_literal(f[0], f[0]);
        const double hi = parse_real_literal(f[1], f[1]);
        const long long n = parse_int_literal(f[2]);
        if (n < 1) throw usage_error("grid axis count must be >= 1");
        return std::tuple<double, double, long long>(lo, hi, n);
    };
    const auto [re0, re1, nre] = axis(text.substr(0, comma));
    const auto [im0, im1, nim] = axis(text.substr(comma + 1));
    std::vector<tau_point<double>> pts;
    pts.reserve(static_cast<std::size_t>(nre * nim));
    for (long long i = 0; i < nre; ++i) {
        const double re = nre == 1 ? re0 : re0 + (re1 - re0) * static_cast<double>(i) /
                                               static_cast<double>(nre - 1);
        for (long long k = 0; k < nim; ++k) {
            double im;
            if (nim == 1) {
                im = im0;
            } else if (log_im) {
                im = im0 * std::pow(im1 / im0, static_cast<double>(k) / static_cast<double>(nim - 1));
            } else {
                im = im0 + (im1 - im0) * static_cast<double>(k) / static_cast<double>(nim - 1);
            }
            pts.emplace_back(re, im);
        }
    }
    return pts;
}

inline std::vector<tau_point<double>> tau_list_of(const command_spec& spec) {
    if (has(spec, "grid")) return parse_grid(spec.params.at("grid"), has(spec, "log-im"));
    return {tau_of(spec)};
}

inline double tol_or(const command_spec& spec, double module_default) {
    return spec.tol_explicit ? spec.tol : module_default;
}

inline void put_complex(jnode& o, const std::string& stem, std::complex<double> v) {
    put(o, stem + "_re", jnum(v.real()));
    put(o, stem + "_im", jnum(v.imag()));
}

inline jnode zeta_node(const zeta_result<double>& z) {
    jnode o = jobj();
    put(o, "zeta_at_0", jnum(z.zeta_at_0));
    put(o, "zeta_prime_at_0", jnum(z.zeta_prime_at_0));
    put(o, "b0", jnum(z.b0));
    put(o, "b1", jnum(z.b1));
    put(o, "determinant", jnum(z.determinant));
    put(o, "psi1", jnum(z.psi1));
    put(o, "psi2", jnum(z.psi2));
    put(o, "method",
        jstr(z.method == zeta_method::mellin_split ? "mellin_split" : "epstein_analytic"));
    return o;
}

inline jnode kronecker_node(const kronecker_record<double>& r) {
    jnode o = jobj();
    put(o, "tau_re", jnum(r.tau.re));
    put(o, "tau_im", jnum(r.tau.im));
    put(o, "determinant", jnum(r.determinant));
    put(o, "candidate_variant", jnum(r.candidate_variant));
    put(o, "candidate_classical", jnum(r.candidate_classical));
    put(o, "ratio_variant", jnum(r.ratio_variant));
    put(o, "ratio_classical", jnum(r.ratio_classical));
    return o;
}

inline std::map<int, double> parse_b_constants(const std::string& text) {
    std::map<int, double> out;
    std::string cur;
    std::vector<std::string> parts;
    for (char c : text) {
        if (c == ',') { parts.push_back(cur); cur.clear(); }
        else cur += c;
    }
    parts.push_back(cur);
    for (const auto& p : parts) {
        const auto colon = p.find(':');
        if (colon == std::string::npos) throw usage_error("--b-constants needs 'k:value' pairs");
        out[static_cast<int>(parse_int_literal(p.substr(0, colon)))] =
            parse_real_literal(p.substr(colon + 1), p);
    }
    return out;
}

inline std::vector<double> parse_csv_reals(const std::string& text, std::size_t n,
                                           const char* what) {
    std::vector<double> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') { out.push_back(parse_real_literal(cur, cur)); cur.clear(); }
        else cur += c;
    }
    out.push_back(parse_real_literal(cur, cur));
    if (out.size() != n) throw usage_error(std::string(what) + ": wrong number of fields");
    return out;
}

} // namespace detail_cli

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

inline int run(const command_spec& spec, std::ostream& out, std::ostream& err) {
    using namespace detail_cli;
    using C = std::complex<double>;
    (void)err;
    jnode doc;

    switch (spec.subcommand) {
        case command_kind::eta: {
            const double tol = tol_or(spec, 1e-12);
            doc = jarr();
            for (const auto& tau : tau_list_of(spec)) {
                jnode o = jobj();
                put(o, "tau_re", jnum(tau.re));
                put(o, "tau_im", jnum(tau.im));
                const C v = eta(tau, tol);
                put_complex(o, "eta", v);
                put(o, "abs", jnum(std::abs(v)));
                const auto red = reduce_to_fundamental_domain(tau);
                put(o, "tau_reduced_re", jnum(red.tau_reduced.re));
                put(o, "tau_reduced_im", jnum(red.tau_reduced.im));
                put(o, "m00", jint(red.matrix[0][0]));
                put(o, "m01", jint(red.matrix[0][1]));
                put(o, "m10", jint(red.matrix[1][0]));
                put(o, "m11", jint(red.matrix[1][1]));
                doc.items.push_back(std::move(o));
            }
            if (!has(spec, "grid")) doc = doc.items[0];
            break;
        }
        case command_kind::eisenstein: {
            const auto tau = tau_of(spec);
            doc = jobj();
            put(doc, "tau_re", jnum(tau.re));
            put(doc, "tau_im", jnum(tau.im));
            const C g2 = eisenstein_g2(tau, tol_or(spec, 1e-5));
            const C g3 = eisenstein_g3(tau, tol_or(spec, 1e-8));
            put_complex(doc, "g2", g2);
            put_complex(doc, "g3", g3);
            break;
        }
        case command_kind::discriminant: {
            const double tol = tol_or(spec, 1e-12);
            doc = jarr();
            for (const auto& tau : tau_list_of(spec)) {
                jnode o = jobj();
                put(o, "tau_re", jnum(tau.re));
                put(o, "tau_im", jnum(tau.im));
                const C d = discriminant_modular(tau, tol);
                put_complex(o, "delta", d);
                put(o, "abs_delta", jnum(std::abs(d)));
                put(o, "l2_form", jnum(l2_norm_holomorphic_form(tau)));
                put(o, "analytic_l2", jnum(analytic_discriminant_l2(tau)));
                if (has(spec, "wp")) {
                    const double h = has(spec, "h")
                                         ? parse_real_literal(spec.params.at("h"), "h")
                                         : 1e-3;
                    put(o, "wp_curvature", jnum(wp_curvature_check(tau, h)));
                    put(o, "wp_reference", jnum(-1.0 / (2.0 * tau.im * tau.im)));
                }
                doc.items.push_back(std::move(o));
            }
            if (!has(spec, "grid")) doc = doc.items[0];
            break;
        }
        case command_kind::j: {
            const double tol = tol_or(spec, 1e-12);
            if (has(spec, "from-lambda")) {
                const C lam = parse_complex(spec.params.at("from-lambda"));
                doc = jobj();
                put_complex(doc, "lambda", lam);
                put_complex(doc, "j", covering_j_from_lambda(lam));
                put_complex(doc, "algebraic_discriminant", algebraic_discriminant_lambda(lam));
                break;
            }
            doc = jarr();
            for (const auto& tau : tau_list_of(spec)) {
                jnode o = jobj();
                put(o, "tau_re", jnum(tau.re));
                put(o, "tau_im", jnum(tau.im));
                put_complex(o, "j", j_invariant(tau, tol));
                doc.items.push_back(std::move(o));
            }
            if (!has(spec, "grid")) doc = doc.items[0];
            break;
        }
        case command_kind::lambda: {
            const double tol = tol_or(spec, 1e-12);
            doc = jarr();
            for (const auto& tau : tau_list_of(spec)) {
                jnode o = jobj();
                put(o, "tau_re", jnum(tau.re));
                put(o, "tau_im", jnum(tau.im));
                put_complex(o, "lambda", lambda_function(tau, tol));
                if (has(spec, "thetas")) {
                    const auto th = theta_constants(tau, tol);
                    put_complex(o, "theta2", th.theta2);
                    put_complex(o, "theta3", th.theta3);
                    put_complex(o, "theta4", th.theta4);
                }
                doc.items.push_back(std::move(o));
            }
            if (!has(spec, "grid")) doc = doc.items[0];
            break;
        }
        case command_kind::spectrum: {
            const auto tau = tau_of(spec);
            const long long count =
                has(spec, "count") ? parse_int_literal(spec.params.at("count")) : 10;
            if (count < 1) throw usage_error("--count must be >= 1");
            const auto ev = eigenvalues(tau, spec.norm, static_cast<std::size_t>(count));
            doc = jarr();
            for (std::size_t k = 0; k < ev.size(); ++k) {
                jnode o = jobj();
                put(o, "index", jint(static_cast<long long>(k)));
                put(o, "eigenvalue", jnum(ev[k]));
                doc.items.push_back(std::move(o));
            }
            break;
        }
        case command_kind::heat_trace: {
            const auto tau = tau_of(spec);
            const double tol = tol_or(spec, 1e-12);
            std::vector<double> ts;
            if (has(spec, "t")) {
                ts.push_back(parse_real_literal(spec.params.at("t"), "t"));
            } else if (has(spec, "t-grid")) {
                const auto text = spec.params.at("t-grid");
                std::vector<std::string> f;
                std::string cur;
                for (char c : text) {
                    if (c == ':') { f.push_back(cur); cur.clear(); }
                    else cur += c;
                }
                f.push_back(cur);
                if (f.size() != 3) throw usage_error("--t-grid needs 'lo:hi:n'");
                const long long n = parse_int_literal(f[2]);
                if (n < 1) throw usage_error("--t-grid count must be >= 1");
                ts = log_spaced(parse_real_literal(f[0], f[0]), parse_real_literal(f[1], f[1]),
                                static_cast<std::size_t>(n));
            } else {
                throw usage_error("heat-trace needs --t or --t-grid");
            }
            const auto trace = make_torus_trace(tau, spec.norm);
            doc = jarr();
            for (double t : ts) {
                jnode o = jobj();
                put(o, "t", jnum(t));
                const auto [theta, bound] = trace.evaluate(t, tol);
                put(o, "theta", jnum(theta));
                put(o, "bound", jnum(bound));
                doc.items.push_back(std::move(o));
            }
            if (has(spec, "t")) doc = doc.items[0];
            break;
        }
        case command_kind::zeta: {
            const auto tau = tau_of(spec);
            const C s = parse_complex(require_param(spec, "s"));
            const C v = epstein_zeta(tau, spec.norm, s, tol_or(spec, 1e-12));
            doc = jobj();
            put(doc, "tau_re", jnum(tau.re));
            put(doc, "tau_im", jnum(tau.im));
            put_complex(doc, "s", s);
            put_complex(doc, "zeta", v);
            break;
        }
        case command_kind::det: {
            const std::string method = has(spec, "method") ? spec.params.at("method") : "both";
            if (method != "mellin" && method != "epstein" && method != "both")
                throw usage_error("--method must be mellin, epstein or both");
            doc = jarr();
            for (const auto& tau : tau_list_of(spec)) {
                jnode o = jobj();
                put(o, "tau_re", jnum(tau.re));
                put(o, "tau_im", jnum(tau.im));
                zeta_result<double> zm{}, ze{};
                if (method != "epstein")
                    zm = mellin_b_coefficients(make_torus_trace(tau, spec.norm),
                                               torus_expansion(tau, spec.norm), 1,
                                               tol_or(spec, 1e-10));
                if (method != "mellin")
                    ze = regularized_determinant_epstein(tau, spec.norm, tol_or(spec, 1e-12));
                if (method == "mellin") {
                    put(o, "mellin", zeta_node(zm));
                } else if (method == "epstein") {
                    put(o, "epstein", zeta_node(ze));
                } else {
                    put(o, "mellin", zeta_node(zm));
                    put(o, "epstein", zeta_node(ze));
                    put(o, "rel_diff",
                        jnum(std::abs(zm.determinant - ze.determinant) /
                             std::max(1e-300, std::abs(ze.determinant))));
                }
                doc.items.push_back(std::move(o));
            }
            if (!has(spec, "grid")) doc = doc.items[0];
            break;
        }
        case command_kind::kronecker: {
            const double tol = tol_or(spec, 1e-12);
            doc = jarr();
            for (const auto& tau : tau_list_of(spec))
                doc.items.push_back(kronecker_node(kronecker_compare(tau, tol)));
            if (!has(spec, "grid")) doc = doc.items[0];
            break;
        }
        case command_kind::fit_exponents: {
            const auto taus =
                parse_grid(require_param(spec, "grid"), has(spec, "log-im"));
            const auto fit = fit_kronecker_exponents(taus, spec.norm);
            doc = jobj();
            put(doc, "c", jnum(fit.c));
            put(doc, "alpha", jnum(fit.alpha));
            put(doc, "beta", jnum(fit.beta));
            put(doc, "rms_residual", jnum(fit.rms_residual));
            break;
        }
        case command_kind::periods: {
            if (has(spec, "lambda") == has(spec, "s"))
                throw usage_error("periods needs exactly one of --lambda or --s");
            doc = jobj();
            if (has(spec, "lambda")) {
                const C lam = parse_complex(spec.params.at("lambda"));
                const auto p = legendre_periods(lam, tol_or(spec, 1e-12));
                put_complex(doc, "lambda", lam);
                put_complex(doc, "pi1", p.pi1);
                put_complex(doc, "pi2", p.pi2);
                put(doc, "tau_re", jnum(p.tau.re));
                put(doc, "tau_im", jnum(p.tau.im));
                put(doc, "l2_norm", jnum(p.l2_norm));
            } else {
                const C s = parse_complex(spec.params.at("s"));
                const long long w =
                    has(spec, "winding") ? parse_int_literal(spec.params.at("winding")) : 0;
                const C p = equianharmonic_period(s, static_cast<int>(w), tol_or(spec, 1e-11));
                put_complex(doc, "s", s);
                put(doc, "winding", jint(w));
                put_complex(doc, "period", p);
                put(doc, "abs", jnum(std::abs(p)));
            }
            break;
        }
        case command_kind::monodromy: {
            const std::string cusp = require_param(spec, "cusp");
            cusp_label label;
            if (cusp == "0") label = cusp_label::zero;
            else if (cusp == "1") label = cusp_label::one;
            else if (cusp == "inf") label = cusp_label::infinity;
            else if (cusp == "none") label = cusp_label::none;
            else throw usage_error("--cusp must be 0, 1, inf or none");
            const C base = has(spec, "basepoint") ? parse_complex(spec.params.at("basepoint"))
                                                  : C(0.5, 0.0);
            const long long steps =
                has(spec, "steps") ? parse_int_literal(spec.params.at("steps")) : 256;
            const auto m = monodromy_around(label, base, static_cast<int>(steps));
            doc = jobj();
            put(doc, "cusp", jstr(cusp));
            put_complex(doc, "basepoint", base);
            put(doc, "m00", jint(m.entries[0][0]));
            put(doc, "m01", jint(m.entries[0][1]));
            put(doc, "m10", jint(m.entries[1][0]));
            put(doc, "m11", jint(m.entries[1][1]));
            put(doc, "det",
                jint(m.entries[0][0] * m.entries[1][1] - m.entries[0][1] * m.entries[1][0]));
            put(doc, "trace", jint(m.entries[0][0] + m.entries[1][1]));
            break;
        }
        case command_kind::growth: {
            const std::string family = require_param(spec, "family");
            growth_family fam;
            if (family == "legendre") fam = growth_family::legendre_at_0;
            else if (family == "equianharmonic") fam = growth_family::equianharmonic;
            else throw usage_error("--family must be legendre or equianharmonic");
            std::vector<double> radii;
            {
                const std::string text =
                    has(spec, "radii") ? spec.params.at("radii") : "1e-4:1e-8:17";
                std::vector<std::string> f;
                std::string cur;
                for (char c : text) {
                    if (c == ':') { f.push_back(cur); cur.clear(); }
                    else cur += c;
                }
                f.push_back(cur);
                if (f.size() != 3) throw usage_error("--radii needs 'hi:lo:n'");
                const long long n = parse_int_literal(f[2]);
                if (n < 2) throw usage_error("--radii count must be >= 2");
                const double r0 = parse_real_literal(f[0], f[0]);
                const double r1 = parse_real_literal(f[1], f[1]);
                // log_spaced wants an ascending range; present hi first as documented
                radii = log_spaced(std::min(r0, r1), std::max(r0, r1),
                                   static_cast<std::size_t>(n));
                std::reverse(radii.begin(), radii.end());
            }
            const auto law = boundary_growth_fit(fam, radii);
            doc = jobj();
            put(doc, "family", jstr(family));
            put(doc, "kind", jstr(law.kind == growth_kind::logarithmic ? "logarithmic" : "power"));
            put(doc, "exponent", jnum(law.exponent));
            put(doc, "constant", jnum(law.constant));
            put(doc, "fit_r2", jnum(law.fit_r2));
            break;
        }
        case command_kind::cy_coeffs: {
            std::string text;
            if (has(spec, "input")) {
                std::ifstream in(spec.params.at("input"));
                if (!in) throw std::runtime_error("cannot open " + spec.params.at("input"));
                std::ostringstream ss;
                ss << in.rdbuf();
                text = ss.str();
            } else if (has(spec, "chern")) {
                text = spec.params.at("chern");
            }
            if (!has(spec, "curvature") && text.empty())
                throw usage_error("cy-coeffs needs --input/--chern or --curvature");
            doc = jobj();
            if (!text.empty()) {
                const auto chern = chern_from_json<double>(text, has(spec, "allow-zero"));
                put(doc, "n", jint(chern.n));
                put(doc, "L_top", jnum(chern.l_top));
                put(doc, "c2_L", jnum(chern.c2_l));
                if (has(spec, "b-constants")) {
                    const auto conj = conjectured_coefficients(
                        chern, parse_b_constants(spec.params.at("b-constants")));
                    for (const auto& [k, v] : conj)
                        put(doc, "conj_a_m" + std::to_string(k), jnum(v));
                }
                if (chern.n == 3) {
                    auto coeffs = cy3_heat_coefficients(chern);
                    put(doc, "a_m3", jnum(coeffs[3]));
                    put(doc, "a_m2", jnum(coeffs[2]));
                    put(doc, "a_m1", jnum(coeffs[1]));
                } else if (!has(spec, "b-constants")) {
                    cy3_heat_coefficients(chern);  // dimension_mismatch, exit 4
                }
            }
            if (has(spec, "curvature")) {
                const auto v = parse_csv_reals(spec.params.at("curvature"), 5, "--curvature");
                const curvature_inputs<double> in(v[0], v[1], v[2], v[3], v[4]);
                put(doc, "gilkey_a_minus1", jnum(gilkey_a_minus1(in)));
                put(doc, "calabi_residual", jnum(calabi_identity_residual(in)));
            }
            break;
        }
        case command_kind::b1: {
            if (has(spec, "tau") == has(spec, "eigenvalues"))
                throw usage_error("b1 needs exactly one of --tau or --eigenvalues");
            zeta_result<double> z;
            double block;
            doc = jobj();
            if (has(spec, "tau")) {
                const auto tau = tau_of(spec);
                const auto expansion = torus_expansion(tau, spec.norm);
                z = b1_from_trace(make_torus_trace(tau, spec.norm), expansion, 1,
                                  tol_or(spec, 1e-10));
                block = mellin_constant_block(expansion);
                put(doc, "tau_re", jnum(tau.re));
                put(doc, "tau_im", jnum(tau.im));
            } else {
                const auto ev = load_eigenvalues<double>(spec.params.at("eigenvalues"));
                if (ev.empty()) throw std::runtime_error("b1: empty eigenvalue file");
                int zero_modes = 0;
                for (double v : ev)
                    if (v <= 1e-12) ++zero_modes;
                asymptotic_expansion<double> expansion;
                // coefficients describe the zero-mode-free trace
                expansion.coefficients = {static_cast<double>(ev.size()) - zero_modes};
                expansion.order = 0;
                expansion.source = expansion_source::analytic;
                z = b1_from_trace(make_spectrum_trace(ev), expansion, zero_modes,
                                  tol_or(spec, 1e-10));
                block = mellin_constant_block(expansion);
                put(doc, "count", jint(static_cast<long long>(ev.size())));
                put(doc, "zero_modes", jint(zero_modes));
            }
            for (auto& [key, value] : zeta_node(z).members) put(doc, key, std::move(value));
            put(doc, "constant_block", jnum(block));
            break;
        }
        case command_kind::scan_a0: {
            const auto taus = tau_list_of(spec);
            const auto rep = a0_constancy_scan(taus, spec.norm);
            if (spec.output == output_format::csv) {
                doc = jarr();
                for (std::size_t k = 0; k < taus.size(); ++k) {
                    jnode o = jobj();
                    put(o, "tau_re", jnum(taus[k].re));
                    put(o, "tau_im", jnum(taus[k].im));
                    put(o, "a0", jnum(rep.a0_values[k]));
                    put(o, "a_minus1", jnum(rep.a_minus1_values[k]));
                    put(o, "residual", jnum(rep.residuals[k]));
                    doc.items.push_back(std::move(o));
                }
            } else {
                doc = jobj();
                jnode pts = jarr();
                for (std::size_t k = 0; k < taus.size(); ++k) {
                    jnode o = jobj();
                    put(o, "tau_re", jnum(taus[k].re));
                    put(o, "tau_im", jnum(taus[k].im));
                    put(o, "a0", jnum(rep.a0_values[k]));
                    put(o, "a_minus1", jnum(rep.a_minus1_values[k]));
                    put(o, "residual", jnum(rep.residuals[k]));
                    pts.items.push_back(std::move(o));
                }
                put(doc, "points", std::move(pts));
                put(doc, "mean_a0", jnum(rep.mean_a0));
                put(doc, "max_deviation", jnum(rep.max_deviation));
                put(doc, "passed", jbool(rep.passed));
            }
            break;
        }
    }

    std::ostringstream buffer;
    if (spec.output == output_format::json) {
        emit_json(doc, buffer);
        buffer << '\n';
    } else {
        emit_csv(doc, buffer);
    }
    out << buffer.str();
    return 0;
}

inline std::string error_name(const std::exception& e) {
    if (dynamic_cast<const convergence_failure*>(&e)) return "ConvergenceFailure";
    if (dynamic_cast<const precision_loss*>(&e)) return "PrecisionLoss";
    if (dynamic_cast<const quadrature_failure*>(&e)) return "QuadratureFailure";
    if (dynamic_cast<const pole_point*>(&e)) return "PolePoint";
    if (dynamic_cast<const invalid_lambda*>(&e)) return "InvalidLambda";
    if (dynamic_cast<const branch_point*>(&e)) return "BranchPoint";
    if (dynamic_cast<const continuation_failure*>(&e)) return "ContinuationFailure";
    if (dynamic_cast<const singular_fit*>(&e)) return "SingularFit";
    if (dynamic_cast<const fit_ambiguous*>(&e)) return "FitAmbiguous";
    if (dynamic_cast<const dimension_mismatch*>(&e)) return "DimensionMismatch";
    if (dynamic_cast<const missing_chern_entry*>(&e)) return "MissingChernEntry";
    if (dynamic_cast<const std::invalid_argument*>(&e)) return "InvalidArgument";
    return "Error";
}

/// operation coverage of the dispatch table, for the reachability test
inline std::vector<std::pair<std::string, std::vector<std::string>>> dispatch_table() {
    return {
        {"eta", {"eta", "reduce_to_fundamental_domain"}},
        {"eisenstein", {"eisenstein_g2", "eisenstein_g3"}},
        {"discriminant",
         {"discriminant_modular", "l2_norm_holomorphic_form", "analytic_discriminant_l2",
          "wp_curvature_check"}},
        {"j", {"j_invariant", "covering_j_from_lambda", "algebraic_discriminant_lambda"}},
        {"lambda", {"lambda_function", "theta_constants"}},
        {"spectrum", {"eigenvalues"}},
        {"heat-trace", {"heat_trace", "heat_trace_direct", "heat_trace_poisson",
                        "make_torus_trace"}},
        {"zeta", {"epstein_zeta"}},
        {"det", {"mellin_b_coefficients", "regularized_determinant_epstein", "torus_expansion",
                 "mellin_upper_integral"}},
        {"kronecker", {"kronecker_compare"}},
        {"fit-exponents", {"fit_kronecker_exponents"}},
        {"periods", {"legendre_periods", "hypergeometric_2f1_half", "equianharmonic_period"}},
        {"monodromy", {"monodromy_around"}},
        {"growth", {"boundary_growth_fit"}},
        {"cy-coeffs",
         {"cy3_heat_coefficients", "conjectured_coefficients", "gilkey_a_minus1",
          "calabi_identity_residual", "chern_from_json", "chern_to_json"}},
        {"b1", {"b1_from_trace", "mellin_constant_block", "load_eigenvalues",
                "make_spectrum_trace", "save_eigenvalues"}},
        {"scan-a0", {"a0_constancy_scan", "extract_heat_coefficients", "log_spaced"}},
    };
}

inline int run_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    command_spec spec;
    try {
        spec = parse(args);
    } catch (const literal_error& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const usage_error& e) {
        err << "error: " << e.what() << '\n' << usage_text();
        return 2;
    }
    try {
        return run(spec, out, err);
    } catch (const literal_error& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const usage_error& e) {
        err << "error: " << e.what() << '\n' << usage_text();
        return 2;
    } catch (const std::exception& e) {
        jnode diag = jobj();
        put(diag, "error", jstr(error_name(e)));
        put(diag, "message", jstr(e.what()));
        emit_json(diag, err);
        err << '\n';
        return 4;
    }
}

} // namespace etalab::cli

#endif
