#include <catch2/catch_amalgamated.hpp>

#include <etalab/etalab.hpp>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace etalab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct cli_run {
    int rc;
    std::string out;
    std::string err;
};

cli_run run(std::vector<std::string> args) {
    args.insert(args.begin(), "etalab");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int rc = cli::run_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {rc, out.str(), err.str()};
}

nlohmann::json parse_out(const cli_run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("complex literal parsing") {
    REQUIRE(cli::parse_complex("1+2i") == std::complex<double>(1.0, 2.0));
    REQUIRE(cli::parse_complex("3-4i") == std::complex<double>(3.0, -4.0));
    REQUIRE(cli::parse_complex("i") == std::complex<double>(0.0, 1.0));
    REQUIRE(cli::parse_complex("-i") == std::complex<double>(0.0, -1.0));
    REQUIRE(cli::parse_complex("2") == std::complex<double>(2.0, 0.0));
    REQUIRE(cli::parse_complex("2i") == std::complex<double>(0.0, 2.0));
    REQUIRE(cli::parse_complex("1e-3i") == std::complex<double>(0.0, 1e-3));
    REQUIRE(cli::parse_complex("1.5e+2-2.5e-1i") == std::complex<double>(150.0, -0.25));
    REQUIRE_THROWS_AS(cli::parse_complex("abc"), cli::literal_error);
    REQUIRE_THROWS_AS(cli::parse_complex(""), cli::literal_error);
    REQUIRE_THROWS_AS(cli::parse_complex("1+2j"), cli::literal_error);
}

TEST_CASE("exit codes") {
    REQUIRE(run({"no-such-command"}).rc == 2);
    REQUIRE(run({"eta"}).rc == 2);                       // missing --tau
    REQUIRE(run({"eta", "--tau"}).rc == 2);              // dangling flag
    REQUIRE(run({"eta", "--tau", "banana"}).rc == 3);    // malformed literal
    REQUIRE(run({"eta", "--tau", "1-2i"}).rc == 4);      // lower half plane: parses, domain rejects
    REQUIRE(run({"j", "--from-lambda", "1"}).rc == 4);   // cusp
    REQUIRE(run({"eta", "--tau", "i"}).rc == 0);
}

TEST_CASE("computation errors leave stdout empty and diagnose on stderr") {
    const auto r = run({"j", "--from-lambda", "0"});
    REQUIRE(r.rc == 4);
    REQUIRE(r.out.empty());
    const auto diag = nlohmann::json::parse(r.err);
    REQUIRE(diag.at("error").get<std::string>() == "InvalidLambda");
    REQUIRE(diag.contains("message"));
}

TEST_CASE("usage errors name the flag") {
    const auto r = run({"eta", "--frequency", "3"});
    REQUIRE(r.rc == 2);
    REQUIRE(r.err.find("frequency") != std::string::npos);
}

TEST_CASE("eta value and reduction word") {
    const auto r = run({"eta", "--tau", "0.5+2i"});
    REQUIRE(r.rc == 0);
    const auto doc = parse_out(r);
    REQUIRE_THAT(doc.at("eta_re").get<double>(), WithinRel(0.58731896086864166, 1e-12));
    REQUIRE_THAT(doc.at("eta_im").get<double>(), WithinRel(0.077322008078790694, 1e-12));
    REQUIRE(doc.at("tau_reduced_re").get<double>() == -0.5);
    REQUIRE(doc.at("m00").get<long long>() == 1);
    REQUIRE(doc.at("m01").get<long long>() == -1);
    REQUIRE(doc.at("m10").get<long long>() == 0);
    REQUIRE(doc.at("m11").get<long long>() == 1);
}

TEST_CASE("determinant in both routes") {
    const auto r = run({"det", "--tau", "i", "--method", "both"});
    REQUIRE(r.rc == 0);
    const auto doc = parse_out(r);
    const double dm = doc.at("mellin").at("determinant").get<double>();
    const double de = doc.at("epstein").at("determinant").get<double>();
    REQUIRE_THAT(dm, WithinRel(0.34830098242141921, 1e-12));
    REQUIRE_THAT(de, WithinRel(0.34830098242141921, 1e-12));
    REQUIRE(doc.at("rel_diff").get<double>() < 1e-12);
}

TEST_CASE("zeta regression anchor") {
    const auto r = run({"zeta", "--tau", "i", "--s", "0.5+0.5i"});
    REQUIRE(r.rc == 0);
    const auto doc = parse_out(r);
    REQUIRE(r.out.find("-0.41723103660436933") != std::string::npos);
    REQUIRE_THAT(doc.at("zeta_im").get<double>(), WithinRel(0.23600883068295442, 1e-13));
}

TEST_CASE("spectrum output") {
    const auto r = run({"spectrum", "--tau", "i", "--count", "6"});
    REQUIRE(r.rc == 0);
    const auto doc = parse_out(r);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 6);
    REQUIRE(doc.at(0).at("eigenvalue").get<double>() == 0.0);
    REQUIRE(doc.at(5).at("index").get<int>() == 5);
    REQUIRE_THAT(doc.at(1).at("eigenvalue").get<double>(), WithinRel(39.478417604357432, 1e-12));
}

TEST_CASE("csv grid output") {
    const auto r = run({"kronecker", "--grid", "-0.2:0.2:2,0.8:1.4:2", "--output", "csv"});
    REQUIRE(r.rc == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    REQUIRE(header.find("ratio_classical") != std::string::npos);
    int rows = 0;
    for (std::string line; std::getline(lines, line);)
        if (!line.empty()) ++rows;
    REQUIRE(rows == 4);
}

TEST_CASE("fit exponents over the default grid") {
    const auto r = run({"fit-exponents", "--grid", "default"});
    REQUIRE(r.rc == 0);
    const auto doc = parse_out(r);
    REQUIRE_THAT(doc.at("alpha").get<double>(), WithinAbs(2.0, 1e-7));
    REQUIRE_THAT(doc.at("beta").get<double>(), WithinAbs(4.0, 1e-7));
    REQUIRE(doc.at("rms_residual").get<double>() < 1e-8);
}

TEST_CASE("periods and winding") {
    const auto r = run({"periods", "--lambda", "0.3"});
    REQUIRE(r.rc == 0);
    const auto doc = parse_out(r);
    REQUIRE_THAT(doc.at("tau_im").get<double>(), WithinRel(1.2109084033966055, 1e-11));

    const auto w = run({"periods", "--s", "64", "--winding", "0"});
    REQUIRE(w.rc == 0);
    const auto wd = parse_out(w);
    REQUIRE_THAT(wd.at("period_re").get<double>(), WithinRel(2.4286506478875816 / 2.0, 1e-10));
}

TEST_CASE("growth subcommand") {
    const auto r = run({"growth", "--family", "equianharmonic", "--radii", "1e-4:1e-8:9"});
    REQUIRE(r.rc == 0);
    const auto doc = parse_out(r);
    REQUIRE(doc.at("kind").get<std::string>() == "power");
    REQUIRE_THAT(doc.at("exponent").get<double>(), WithinAbs(-1.0 / 3.0, 1e-3));
    REQUIRE(run({"growth", "--family", "legendre", "--radii", "1e-3:1e-6:7"}).rc == 4);
}

TEST_CASE("monodromy subcommand") {
    const auto r = run({"monodromy", "--cusp", "inf"});
    REQUIRE(r.rc == 0);
    const auto doc = parse_out(r);
    REQUIRE(doc.at("m00").get<long long>() == -3);
    REQUIRE(doc.at("m01").get<long long>() == -2);
    REQUIRE(doc.at("m10").get<long long>() == 2);
    REQUIRE(doc.at("m11").get<long long>() == 1);
    REQUIRE(doc.at("det").get<long long>() == 1);
    REQUIRE(run({"monodromy", "--cusp", "2"}).rc == 2);
}

TEST_CASE("cy coefficients from inline chern data") {
    const auto r = run({"cy-coeffs", "--chern", R"({"n":3,"L_top":5,"c2_L":50})"});
    REQUIRE(r.rc == 0);
    const auto doc = parse_out(r);
    REQUIRE_THAT(doc.at("a_m3").get<double>(), WithinRel(0.39788735772973838, 1e-15));
    REQUIRE(doc.at("a_m2").get<double>() == 0.0);
    REQUIRE_THAT(doc.at("a_m1").get<double>(), WithinRel(-0.022104853207207686, 1e-15));
}

TEST_CASE("b1 from an eigenvalue file") {
    const auto path = std::filesystem::temp_directory_path() / "etalab_cli_ev.txt";
    {
        std::ofstream f(path);
        f << "0\n1\n1\n4\n";
    }
    const auto r = run({"b1", "--eigenvalues", path.string()});
    std::filesystem::remove(path);
    REQUIRE(r.rc == 0);
    const auto doc = parse_out(r);
    REQUIRE(doc.at("count").get<int>() == 4);
    REQUIRE(doc.at("zero_modes").get<int>() == 1);
    REQUIRE_THAT(doc.at("determinant").get<double>(), WithinRel(4.0, 1e-10));
}

TEST_CASE("scan-a0 summary") {
    const auto r = run({"scan-a0", "--grid", "-0.2:0.2:2,0.9:1.5:2"});
    REQUIRE(r.rc == 0);
    const auto doc = parse_out(r);
    REQUIRE(doc.at("passed").get<bool>());
    REQUIRE_THAT(doc.at("mean_a0").get<double>(), WithinAbs(-1.0, 1e-4));
    REQUIRE(doc.at("points").size() == 4);
}

TEST_CASE("reruns are byte identical") {
    const std::vector<std::vector<std::string>> sweep = {
        {"det", "--tau", "0.3+0.9i", "--method", "both"},
        {"kronecker", "--grid", "default", "--output", "csv"},
        {"lambda", "--tau", "0.2+1.1i", "--thetas"},
        {"growth", "--family", "equianharmonic", "--radii", "1e-4:1e-8:9"},
    };
    for (const auto& args : sweep) {
        const auto a = run(args);
        const auto b = run(args);
        REQUIRE(a.rc == b.rc);
        REQUIRE(a.out == b.out);
        REQUIRE(a.err == b.err);
    }
}

TEST_CASE("dispatch table covers every subcommand") {
    const auto table = cli::dispatch_table();
    const auto& names = cli::detail_cli::command_names();
    REQUIRE(table.size() == names.size());
    for (const auto& [sub, ops] : table) {
        REQUIRE(names.count(sub) == 1);
        REQUIRE_FALSE(ops.empty());
    }
}

TEST_CASE("grid parsing rejects malformed ranges") {
    REQUIRE(run({"eta", "--grid", "0:1"}).rc == 2);
    REQUIRE(run({"eta", "--grid", "0:1:3,nonsense:2:2"}).rc == 3);
    REQUIRE(run({"eta", "--grid", "0:1:0,1:2:2"}).rc == 2);
}

TEST_CASE("usage text lists every subcommand") {
    const auto text = cli::usage_text();
    for (const auto& [name, kind] : cli::detail_cli::command_names())
        REQUIRE(text.find(name) != std::string::npos);
}
