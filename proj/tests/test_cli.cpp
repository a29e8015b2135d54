#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "quarterplane/oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string dir = "cli_test_out";
    fs::create_directories(dir);
    const std::string cmd = std::string(QPDE_BINARY_PATH) + " " + args + " > " +
                            dir + "/stdout.txt 2>&1";
    const int rc = std::system(cmd.c_str());
    std::ifstream in(dir + "/stdout.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("cli: solve heat step datum matches the erfc reference") {
    auto r = run("solve --eq heat --data step --grid x=0.5:4:3,t=0.5:4:3 "
                 "--tol 1e-10 --out cli_test_out/heat_step");
    REQUIRE(r.exit_code == 0);
    const std::string csv = slurp("cli_test_out/heat_step.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "x,t,value,abs_error");
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        double x, t, v, e;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &t, &v, &e) == 4);
        CHECK(std::abs(v - qp::oracle::erfc_solution(x, t)) < 1e-9);
        CHECK(e <= 1e-9);
        ++rows;
    }
    CHECK(rows == 9);

    // manifest records the incompatibility warning data
    auto m = ordered_json::parse(slurp("cli_test_out/heat_step.manifest.json"));
    CHECK(m["command"] == "solve");
    CHECK(m["compatibility"]["all_pass"] == false);
    CHECK(m["outputs"]["rows"] == 9);
}

TEST_CASE("cli: reproducible byte-identical output") {
    auto r1 = run("solve --eq heat --data step --grid point:1,1 --tol 1e-10 "
                  "--out cli_test_out/rep1");
    auto r2 = run("solve --eq heat --data step --grid point:1,1 --tol 1e-10 "
                  "--out cli_test_out/rep2");
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp("cli_test_out/rep1.csv") == slurp("cli_test_out/rep2.csv"));
}

TEST_CASE("cli: solve kdv step matches example2_v; custom expressions work") {
    auto r = run("solve --eq kdv --data step --grid point:1,1 --tol 1e-9 "
                 "--out cli_test_out/kdv_step");
    REQUIRE(r.exit_code == 0);
    const std::string csv = slurp("cli_test_out/kdv_step.csv");
    double x, t, v, e;
    REQUIRE(std::sscanf(csv.c_str(), "x,t,value,abs_error\n%lf,%lf,%lf,%lf", &x,
                        &t, &v, &e) == 4);
    CHECK(std::abs(v - 0.4399149664060166) < 1e-8);

    // custom expression datum equivalent to exp-compat
    auto rc = run("solve --eq heat --u0 \"exp(-x)\" --g0 \"exp(t)\" --decay 1 "
                  "--amp 1.5 --g0-growth 1 --grid point:1,1 --tol 1e-8 "
                  "--out cli_test_out/custom");
    REQUIRE(rc.exit_code == 0);
    const std::string csv2 = slurp("cli_test_out/custom.csv");
    REQUIRE(std::sscanf(csv2.c_str(), "x,t,value,abs_error\n%lf,%lf,%lf,%lf", &x,
                        &t, &v, &e) == 4);
    CHECK(std::abs(v - 1.0) < 1e-6);  // exact solution e^{t-x} at (1,1)
}

TEST_CASE("cli: solve zero datum produces zeros") {
    auto r = run("solve --eq heat --data zero --grid x=0.5:2:2,t=0.5:2:2 "
                 "--out cli_test_out/zeros");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(slurp("cli_test_out/zeros.csv"));
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        double x, t, v, e;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &t, &v, &e) == 4);
        CHECK(v == 0.0);
    }
}

TEST_CASE("cli: counterexample generates a certificate") {
    auto r = run("counterexample --eq heat --n 1 --out cli_test_out/wit1");
    REQUIRE(r.exit_code == 0);
    auto cert = ordered_json::parse(slurp("cli_test_out/wit1.certificate.json"));
    CHECK(cert["equation"] == "heat");
    CHECK(cert["n"] == 1);
    const double p = cert["certificate"]["l2_exponent_fit"]["p"].get<double>();
    CHECK(p < -1.4);
    CHECK(p > -1.6);
    CHECK(cert["certificate"]["violated_clause"] == "uniform_l2_integrability");
    const std::string text = slurp("cli_test_out/wit1.explain.txt");
    CHECK(text.find("uniform-in-time L2 integrability") != std::string::npos);
}

TEST_CASE("cli: counterexample rejects n = 0 as a usage error") {
    auto r = run("counterexample --eq heat --n 0 --out cli_test_out/wit0");
    CHECK(r.exit_code != 0);
}

TEST_CASE("cli: kdv counterexample of order 2 certifies") {
    auto r = run("counterexample --eq kdv --n 2 --out cli_test_out/kdv2");
    REQUIRE(r.exit_code == 0);
    auto cert = ordered_json::parse(slurp("cli_test_out/kdv2.certificate.json"));
    CHECK(cert["certificate"]["l2_exponent_fit"]["p"].get<double>() < 0.0);
    CHECK(cert["certificate"]["residual_sup"].get<double>() <= 1e-5);
}

TEST_CASE("cli: verify compatible utm candidate passes all clauses") {
    auto r = run("verify --eq heat --data exp-compat --candidate utm --tol 1e-8 "
                 "--out cli_test_out/verify_ok");
    CHECK(r.exit_code == 0);
    auto rep = ordered_json::parse(slurp("cli_test_out/verify_ok.report.json"));
    CHECK(rep["all_pass"] == true);
}

TEST_CASE("cli: verify witness fails exactly the integrability clause") {
    auto r = run("verify --eq heat --data zero --candidate witness:1 "
                 "--out cli_test_out/verify_witness");
    CHECK(r.exit_code == 1);
    auto rep = ordered_json::parse(slurp("cli_test_out/verify_witness.report.json"));
    CHECK(rep["all_pass"] == false);
    for (const auto& clause : rep["clauses"]) {
        if (clause["clause"] == "uniform_l2_integrability") {
            CHECK(clause["pass"] == false);
        } else {
            CHECK(clause["pass"] == true);
        }
    }
}

TEST_CASE("cli: verify kdv zero utm candidate passes") {
    auto r = run("verify --eq kdv --data zero --candidate utm "
                 "--out cli_test_out/verify_zero");
    CHECK(r.exit_code == 0);
}

TEST_CASE("cli: config file supplies defaults, flags win") {
    {
        std::ofstream cfg("cli_test_out/cfg.json");
        cfg << R"({"eq": "heat", "data": "step", "grid": "point:1,1", )"
            << R"("tol": 1e-9, "out": "cli_test_out/from_config"})";
    }
    auto r = run("solve --config cli_test_out/cfg.json");
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists("cli_test_out/from_config.csv"));

    // explicit flag overrides the config value
    auto r2 = run("solve --config cli_test_out/cfg.json --out cli_test_out/override");
    REQUIRE(r2.exit_code == 0);
    CHECK(fs::exists("cli_test_out/override.csv"));
}

TEST_CASE("cli: QPDE_TOL environment variable sets the default tolerance") {
    const std::string dir = "cli_test_out";
    fs::create_directories(dir);
    const std::string cmd = std::string("QPDE_TOL=1e-6 ") + QPDE_BINARY_PATH +
                            " solve --eq heat --data step --grid point:1,1 "
                            "--out cli_test_out/envtol > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    auto m = ordered_json::parse(slurp("cli_test_out/envtol.manifest.json"));
    CHECK(m["tol"].get<double>() == 1e-6);
}

TEST_CASE("cli: bad expression reports a location") {
    auto r = run("solve --eq heat --u0 \"exp(-x\" --grid point:1,1 "
                 "--out cli_test_out/bad");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("position") != std::string::npos);
}
