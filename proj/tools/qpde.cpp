// qpde: evaluate quarter-plane solutions on grids, generate and certify
// non-uniqueness counterexamples, and run the verification battery.
//
// Subcommands:
//   solve           evaluate the solution representation on a grid -> CSV + manifest
//   counterexample  generate a certified witness -> CSV + certificate + report
//   verify          run the hypothesis battery on a candidate -> report JSON
//
// Output formats: CSV with a header row and %.17g numbers; JSON with stable
// key ordering. Every run writes a manifest sufficient to reproduce it.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quarterplane/quarterplane.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace qp;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// data construction
// ---------------------------------------------------------------------------

struct DataSpec {
    std::string preset;  // zero | step | exp-compat | exp-step | exp-decay | forcing
    std::string u0, g0, f;  // expression overrides
    double decay = 1.0;
    double amplitude = 2.0;
    double g0_growth = 0.0;

    json to_json() const {
        json j;
        if (!preset.empty()) j["preset"] = preset;
        if (!u0.empty()) j["u0"] = u0;
        if (!g0.empty()) j["g0"] = g0;
        if (!f.empty()) j["f"] = f;
        j["decay_rate"] = decay;
        j["amplitude"] = amplitude;
        j["g0_growth"] = g0_growth;
        return j;
    }
};

transforms::HalfLineData data_from_preset(const std::string& name) {
    if (name == "zero") return data::zero();
    if (name == "step") return data::step();
    if (name == "exp-compat") return data::exp_compat();
    if (name == "exp-step") return data::exp_step();
    if (name == "forcing") return data::manufactured_forcing();
    if (name == "exp-decay") {
        auto d = data::exp_compat();
        d.label = "exp-decay";
        d.g0_zero = true;
        d.g0 = [](double) { return 0.0; };
        d.g0_d1 = [](double) { return 0.0; };
        d.g0_retarded = nullptr;
        d.g0_bound_const = 0.0;
        d.g0_bound_growth = 0.0;
        return d;
    }
    throw std::invalid_argument("unknown data preset '" + name + "'");
}

/// Compile an expression string into a scalar function of one variable
/// with exact jets.
struct CompiledScalar {
    expr::Expression e;
    std::string var;
    double operator()(double v) const {
        expr::Expression::Env env;
        env[var] = expr::Jet::variable(v);
        return e.eval(env).value();
    }
    expr::Jet jet(double v) const {
        expr::Expression::Env env;
        env[var] = expr::Jet::variable(v);
        return e.eval(env);
    }
};

transforms::HalfLineData build_data(const DataSpec& spec) {
    transforms::HalfLineData d =
        spec.preset.empty() ? data::zero() : data_from_preset(spec.preset);
    if (!spec.u0.empty()) {
        auto c = std::make_shared<CompiledScalar>(
            CompiledScalar{expr::Expression::parse(spec.u0), "x"});
        d.label = "custom";
        d.u0_zero = (spec.u0 == "0");
        d.u0 = [c](double y) { return (*c)(y); };
        d.u0_derivs = {[c](double y) { return c->jet(y).d1(); },
                       [c](double y) { return c->jet(y).d2(); },
                       [c](double y) { return c->jet(y).d3(); }};
        d.u0_hat = nullptr;
        d.u0_hat_poles.clear();
        d.decay_rate = spec.decay;
        d.amplitude = spec.amplitude;
    }
    if (!spec.g0.empty()) {
        auto c = std::make_shared<CompiledScalar>(
            CompiledScalar{expr::Expression::parse(spec.g0), "t"});
        d.label = "custom";
        d.g0_zero = (spec.g0 == "0");
        d.g0 = [c](double t) { return (*c)(t); };
        d.g0_d1 = [c](double t) { return c->jet(t).d1(); };
        d.g0_retarded = nullptr;
        d.g0_bound_growth = spec.g0_growth;
        double peak = 1e-12;
        for (double t = 0.0; t <= 12.0; t += 0.25) {
            peak = std::max(peak, std::abs((*c)(t)) *
                                      std::exp(-spec.g0_growth * t));
        }
        d.g0_bound_const = 1.5 * peak;
    }
    if (!spec.f.empty()) {
        auto e = std::make_shared<expr::Expression>(expr::Expression::parse(spec.f));
        d.label = "custom";
        d.f_zero = (spec.f == "0");
        d.f = [e](double y, double tau) {
            expr::Expression::Env env;
            env["x"] = expr::Jet::constant(y);
            env["t"] = expr::Jet::constant(tau);
            return e->eval(env).value();
        };
        d.f_hat = nullptr;
        d.f_hat_poles.clear();
        d.decay_rate = spec.decay;
        d.amplitude = spec.amplitude;
        d.f_boundary_sup = 0.0;  // unknown: fall back to the flat bound
        d.f_dy_l1 = 0.0;
    }
    return d;
}

// ---------------------------------------------------------------------------
// grids
// ---------------------------------------------------------------------------

struct GridSpec {
    std::string text = "default";
    std::vector<std::pair<double, double>> points;

    json to_json() const {
        json j;
        j["spec"] = text;
        j["points"] = points.size();
        return j;
    }
};

std::vector<double> log_space(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i)
        v.push_back(std::exp(std::log(a) +
                             (std::log(b) - std::log(a)) * i / std::max(1, n - 1)));
    return v;
}

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    g.text = text;
    auto cross = [&](std::vector<double> xs, std::vector<double> ts) {
        for (double x : xs)
            for (double t : ts) g.points.push_back({x, t});
    };
    if (text == "default") {
        cross(log_space(0.05, 20.0, 20), log_space(0.05, 10.0, 20));
        return g;
    }
    if (text.rfind("point:", 0) == 0) {
        double x, t;
        if (std::sscanf(text.c_str(), "point:%lf,%lf", &x, &t) != 2)
            throw std::invalid_argument("grid: expected point:x,t");
        g.points.push_back({x, t});
        return g;
    }
    // x=a:b:n,t=a:b:n  (log-spaced)
    double xa, xb, ta, tb;
    int nx, nt;
    if (std::sscanf(text.c_str(), "x=%lf:%lf:%d,t=%lf:%lf:%d", &xa, &xb, &nx, &ta,
                    &tb, &nt) == 6) {
        cross(log_space(xa, xb, nx), log_space(ta, tb, nt));
        return g;
    }
    throw std::invalid_argument(
        "grid: expected 'default', 'point:x,t' or 'x=a:b:n,t=a:b:n'");
}

// ---------------------------------------------------------------------------
// output helpers
// ---------------------------------------------------------------------------

void ensure_parent(const std::string& path) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_text(const std::string& path, const std::string& content) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file " + path);
    out << content;
}

json base_manifest(const std::string& command) {
    json j;
    j["tool"] = "qpde";
    j["version"] = kVersion;
    j["command"] = command;
    return j;
}

json compat_json(const verify::CompatFlags& c) {
    json arr = json::array();
    for (const auto& cond : c.conditions) {
        arr.push_back({{"condition", cond.name},
                       {"residual", cond.residual},
                       {"pass", cond.pass}});
    }
    return arr;
}

// ---------------------------------------------------------------------------
// subcommand: solve
// ---------------------------------------------------------------------------

int cmd_solve(const std::string& eq, const DataSpec& dspec, const GridSpec& grid,
              double tol, const std::string& out) {
    auto data = build_data(dspec);
    const auto compat = verify::check_compatibility(
        data, eq == "heat" ? verify::Equation::heat : verify::Equation::kdv);
    if (!compat.all_pass) {
        std::cerr << "warning: data are incompatible at the corner; the solution "
                     "representation is still evaluated (see manifest)\n";
    }

    std::string csv = "x,t,value,abs_error\n";
    for (auto [x, t] : grid.points) {
        double value, err;
        if (eq == "heat") {
            auto r = heat::solve_heat_result(data, heat::Point(x, t), tol);
            value = r.value;
            err = r.abs_error;
        } else {
            auto r = kdv::solve_kdv_result(data, kdv::Point(x, t), tol);
            value = r.value;
            err = r.abs_error;
        }
        csv += fmt17(x) + "," + fmt17(t) + "," + fmt17(value) + "," + fmt17(err) + "\n";
    }
    write_text(out + ".csv", csv);

    json m = base_manifest("solve");
    m["equation"] = eq;
    m["data"] = dspec.to_json();
    m["grid"] = grid.to_json();
    m["tol"] = tol;
    m["contour"] = {{"heat_ray_angle", pi / 8.0},
                    {"kdv_line_eta", "auto (0.45 * decay rate, capped at 1)"},
                    {"kdv_gamma_offset", "auto"}};
    m["compatibility"] = {{"all_pass", compat.all_pass},
                          {"conditions", compat_json(compat)}};
    m["outputs"] = {{"csv", out + ".csv"},
                    {"rows", grid.points.size()}};
    write_text(out + ".manifest.json", m.dump(2) + "\n");
    std::cout << "wrote " << out << ".csv (" << grid.points.size() << " rows)\n";
    return 0;
}

// ---------------------------------------------------------------------------
// subcommand: counterexample
// ---------------------------------------------------------------------------

int cmd_counterexample(const std::string& eq, int n, const std::string& out) {
    const auto equation =
        eq == "heat" ? verify::Equation::heat : verify::Equation::kdv;
    nonuniq::Witness w;
    try {
        w = nonuniq::generate(equation, n);
    } catch (const CertificationError& e) {
        std::cerr << "certification failed: " << e.what() << "\n";
        return 1;
    }

    std::string csv = "x,t,value\n";
    for (double x : log_space(0.05, 10.0, 15)) {
        for (double t : log_space(0.25, 4.0, 10)) {
            csv += fmt17(x) + "," + fmt17(t) + "," + fmt17(w.evaluator(x, t)) + "\n";
        }
    }
    write_text(out + ".csv", csv);

    auto e = nonuniq::explain(w);
    json cert = base_manifest("counterexample");
    cert["equation"] = eq;
    cert["n"] = n;
    cert["certificate"] = e.json;
    write_text(out + ".certificate.json", cert.dump(2) + "\n");
    write_text(out + ".explain.txt", e.text);
    std::cout << "wrote " << out << ".{csv,certificate.json,explain.txt}\n";
    std::cout << e.text;
    return 0;
}

// ---------------------------------------------------------------------------
// subcommand: verify
// ---------------------------------------------------------------------------

int cmd_verify(const std::string& eq, const DataSpec& dspec,
               const std::string& candidate, double tol, const std::string& out) {
    const auto equation =
        eq == "heat" ? verify::Equation::heat : verify::Equation::kdv;
    auto data = build_data(dspec);

    verify::CandidateSolution cand;
    cand.equation = equation;
    cand.claimed_data = data;
    bool closed_form_candidate = false;

    if (candidate == "utm") {
        if (equation == verify::Equation::heat) {
            cand.evaluator = [data, tol](double x, double t) {
                return heat::solve_heat(data, heat::Point(x, t), tol);
            };
        } else {
            cand.evaluator = [data, tol](double x, double t) {
                return kdv::solve_kdv(data, kdv::Point(x, t), tol);
            };
        }
    } else if (candidate.rfind("witness:", 0) == 0) {
        const int n = std::atoi(candidate.c_str() + 8);
        auto w = nonuniq::generate(equation, n);
        cand.evaluator = w.evaluator;
        closed_form_candidate = (equation == verify::Equation::heat);
    } else if (candidate.rfind("expr:", 0) == 0) {
        auto e = std::make_shared<expr::Expression>(
            expr::Expression::parse(candidate.substr(5)));
        cand.evaluator = [e](double x, double t) {
            expr::Expression::Env env;
            env["x"] = expr::Jet::constant(x);
            env["t"] = expr::Jet::constant(t);
            return e->eval(env).value();
        };
        closed_form_candidate = true;
    } else {
        throw std::invalid_argument("candidate must be utm, witness:N or expr:...");
    }

    verify::VerificationReport rep;
    json clauses = json::array();
    bool all_pass = true;
    auto record = [&](const std::string& name, bool pass, double metric,
                      double threshold) {
        clauses.push_back({{"clause", name},
                           {"pass", pass},
                           {"metric", metric},
                           {"threshold", threshold}});
        all_pass = all_pass && pass;
    };

    // compatibility (pure data check)
    auto compat = verify::check_compatibility(data, equation);
    rep.compat_flags = compat.conditions;
    double worst_compat = 0.0;
    for (auto& c : compat.conditions)
        worst_compat = std::max(worst_compat, std::abs(c.residual));
    record("compatibility", compat.all_pass, worst_compat, 1e-10);

    // PDE residual; quadrature-backed candidates need a larger FD step to
    // stay above the evaluator noise floor. Normalized by the local solution
    // scale so exponentially growing solutions are judged fairly.
    verify::FdSteps fd;
    double residual_tol = 1e-5;
    if (!closed_form_candidate) {
        fd.h_time = fd.h_space = 0.02;
        fd.h_space3 = 0.04;
        residual_tol = 1e-3;
    }
    double residual_sup = 0.0;
    for (double x : {0.6, 1.2, 2.5}) {
        for (double t : {2.5, 4.0, 6.0}) {
            const double r = std::abs(verify::residual_at(cand, x, t, fd));
            const double scale = std::max(1.0, std::abs(cand.evaluator(x, t)));
            residual_sup = std::max(residual_sup, r / scale);
        }
    }
    rep.residual_sup = residual_sup;
    record("pde_residual", rep.residual_sup <= residual_tol, rep.residual_sup,
           residual_tol);

    // boundary traces
    auto traces = verify::boundary_traces(cand, {1e-2, 1e-3},
                                          log_space(0.5, 2.0, 4),
                                          log_space(0.5, 2.0, 4));
    rep.trace_rows = traces.rows;
    rep.trace_sup_x0 = traces.trace_sup_x0;
    rep.trace_sup_t0 = traces.trace_sup_t0;
    const double trace_tol = 2e-2;
    record("boundary_traces",
           rep.trace_sup_x0 <= trace_tol && rep.trace_sup_t0 <= trace_tol,
           std::max(rep.trace_sup_x0, rep.trace_sup_t0), trace_tol);

    // decay probes
    rep.decay = verify::decay_probes(cand, {5.0, 10.0, 20.0, 25.0}, {1.0, 2.0});
    record("spatial_decay", rep.decay.decays,
           std::abs(rep.decay.rows.back().v), 0.0);

    // uniform-L2 integrability exponent
    rep.l2 = verify::integrability_exponent(cand, 1.0, {0.3, 0.5, 0.7, 1.0}, 1e-6);
    const double l2_floor = -0.1;
    const bool l2_pass = rep.l2.degenerate || rep.l2.p >= l2_floor;
    record("uniform_l2_integrability", l2_pass,
           rep.l2.degenerate ? 0.0 : rep.l2.p, l2_floor);

    rep.envelope_violation = verify::envelope_violated(data);
    record("decay_declaration", !rep.envelope_violation,
           rep.envelope_violation ? 1.0 : 0.0, 0.0);

    json j = base_manifest("verify");
    j["equation"] = eq;
    j["data"] = dspec.to_json();
    j["candidate"] = candidate;
    j["tol"] = tol;
    j["clauses"] = clauses;
    j["all_pass"] = all_pass;
    j["report"] = verify::to_json(rep);
    write_text(out + ".report.json", j.dump(2) + "\n");

    for (const auto& c : clauses) {
        std::cout << (c["pass"].get<bool>() ? "PASS " : "FAIL ")
                  << c["clause"].get<std::string>() << " (metric "
                  << c["metric"].get<double>() << ")\n";
    }
    std::cout << (all_pass ? "all clauses pass" : "some clauses fail") << "\n";
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quarter-plane evolution solver and non-uniqueness toolkit"};
    app.set_version_flag("--version", kVersion);

    double default_tol = 1e-10;
    if (const char* env = std::getenv("QPDE_TOL")) default_tol = std::atof(env);

    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON config file mirroring the long options");

    // solve
    auto* solve = app.add_subcommand("solve", "evaluate a solution on a grid");
    std::string s_eq = "heat", s_grid = "default", s_out = "qpde_solve";
    DataSpec s_data;
    double s_tol = default_tol;
    solve->add_option("--eq", s_eq, "heat | kdv")
        ->check(CLI::IsMember({"heat", "kdv"}));
    solve->add_option("--data", s_data.preset,
                      "zero | step | exp-compat | exp-step | exp-decay | forcing");
    solve->add_option("--u0", s_data.u0, "initial datum expression in x");
    solve->add_option("--g0", s_data.g0, "boundary datum expression in t");
    solve->add_option("--f", s_data.f, "forcing expression in x and t");
    solve->add_option("--decay", s_data.decay, "declared decay rate of u0 and f");
    solve->add_option("--amp", s_data.amplitude, "declared envelope amplitude");
    solve->add_option("--g0-growth", s_data.g0_growth,
                      "declared exponential growth rate of g0");
    solve->add_option("--grid", s_grid, "default | point:x,t | x=a:b:n,t=a:b:n");
    solve->add_option("--tol", s_tol, "absolute quadrature tolerance");
    solve->add_option("--out", s_out, "output path prefix");

    // counterexample
    auto* ce = app.add_subcommand("counterexample",
                                  "generate a certified non-uniqueness witness");
    std::string c_eq = "heat", c_out = "qpde_witness";
    int c_n = 1;
    ce->add_option("--eq", c_eq, "heat | kdv")
        ->check(CLI::IsMember({"heat", "kdv"}));
    ce->add_option("--n", c_n, "derivative order of the witness")
        ->check(CLI::Range(1, 8));
    ce->add_option("--out", c_out, "output path prefix");

    // verify
    auto* ver = app.add_subcommand("verify", "run the hypothesis battery");
    std::string v_eq = "heat", v_candidate = "utm", v_out = "qpde_verify";
    DataSpec v_data;
    double v_tol = 1e-8;
    ver->add_option("--eq", v_eq, "heat | kdv")
        ->check(CLI::IsMember({"heat", "kdv"}));
    ver->add_option("--data", v_data.preset, "data preset (see solve)");
    ver->add_option("--u0", v_data.u0, "initial datum expression in x");
    ver->add_option("--g0", v_data.g0, "boundary datum expression in t");
    ver->add_option("--f", v_data.f, "forcing expression in x and t");
    ver->add_option("--decay", v_data.decay, "declared decay rate");
    ver->add_option("--amp", v_data.amplitude, "declared envelope amplitude");
    ver->add_option("--g0-growth", v_data.g0_growth, "declared growth of g0");
    ver->add_option("--candidate", v_candidate, "utm | witness:N | expr:...");
    ver->add_option("--tol", v_tol, "evaluator tolerance");
    ver->add_option("--out", v_out, "output path prefix");

    app.require_subcommand(1);

    // config file: a JSON object of long-option values, applied as defaults
    // (explicit command-line flags win)
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string cfgfile;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) {
                std::cerr << "--config requires a path\n";
                return 2;
            }
            cfgfile = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
    }
    if (!cfgfile.empty()) {
        if (args.empty()) {
            std::cerr << "--config requires a subcommand\n";
            return 2;
        }
        std::ifstream in(cfgfile);
        if (!in) {
            std::cerr << "cannot open config file " << cfgfile << "\n";
            return 2;
        }
        json cfg = json::parse(in, nullptr, true);
        std::vector<std::string> opts;
        for (auto& [k, v] : cfg.items()) {
            opts.push_back("--" + k);
            opts.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
        args.insert(args.begin() + 1, opts.begin(), opts.end());
    }
    for (auto* sub : {solve, ce, ver}) {
        for (auto* opt : sub->get_options()) {
            opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        }
    }

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (solve->parsed()) return cmd_solve(s_eq, s_data, parse_grid(s_grid), s_tol, s_out);
        if (ce->parsed()) return cmd_counterexample(c_eq, c_n, c_out);
        if (ver->parsed()) return cmd_verify(v_eq, v_data, v_candidate, v_tol, v_out);
    } catch (const expr::ParseError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
