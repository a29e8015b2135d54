#pragma once

// The counterexample generator: t-derivatives of the unit-step solutions are
// nonzero classical solutions of the zero-data problems. generate() packages
// one as a certified witness; certification runs the verify battery (residual,
// traces, nonvanishing, L2-exponent fit) and fails loudly on any clause.

#include <cmath>
#include <functional>

#include "quarterplane/common.hpp"
#include "quarterplane/data.hpp"
#include "quarterplane/heat.hpp"
#include "quarterplane/kdv.hpp"
#include "quarterplane/verify.hpp"

namespace qp::nonuniq {

using verify::Equation;

struct ProbeConfig {
    // Nonvanishing scan (log-spaced), with the scale-aware normalization
    // |u_n| * min(1, t^n): the sup over x of |u_n| grows like t^{-n} toward
    // t = 0 for both families, so the normalized metric equals the t >= 1
    // peak (0.2420 for the first heat witness).
    double scan_x_min = 1e-3, scan_x_max = 20.0;
    double scan_t_min = 1e-3, scan_t_max = 10.0;
    int scan_nx = 25, scan_nt = 25;
    double nonvanish_floor = 1e-2;

    // FD residual clause. The grid floor keeps the FD truncation error of the
    // high-order family members below the tolerance (the witnesses blow up
    // like t^{-n+1/2} toward t = 0, and so do their derivatives).
    double residual_tol = 1e-5;
    verify::FdSteps fd{};
    double residual_x_min = 0.5, residual_x_max = 8.0;
    double residual_t_max = 10.0;
    int residual_nx = 6, residual_nt = 5;

    // Boundary-trace clause: offsets decreasing; probe windows sit away from
    // the corner, where the trace limits are attained.
    std::vector<double> trace_offsets{1e-2, 1e-3, 1e-4};
    double trace_tol = 1e-4;

    // L2 exponent fit window.
    std::vector<double> l2_samples{0.25, 0.5, 1.0, 2.0, 4.0};

    // Evaluator tolerance for contour-based witnesses. The certificate
    // thresholds sit at 1e-5 and 1e-4, so 1e-8 leaves three orders of margin
    // while staying above the rounding floor of the widest scan integrals.
    double quad_tol = 1e-8;

    double residual_t_min(int n) const { return n <= 6 ? 2.5 : 4.0; }
    double trace_t_min(int n) const { return n <= 6 ? 2.5 : 4.0; }
};

struct Witness {
    Equation equation = Equation::heat;
    int n = 1;
    std::function<double(double, double)> evaluator;
    verify::VerificationReport certificate;
};

namespace detail {

inline std::vector<double> log_space(double a, double b, int n) {
    std::vector<double> v;
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i)
        v.push_back(std::exp(la + (lb - la) * i / std::max(1, n - 1)));
    return v;
}

inline std::function<double(double, double)> witness_evaluator(Equation eq, int n,
                                                               double tol) {
    if (eq == Equation::heat) {
        return [n](double x, double t) {
            return heat::detail::un_closed_form(n, x, t);
        };
    }
    // The family blows up like t^{-n-1/3} toward t = 0; an absolute tolerance
    // is meaningful only relative to that scale.
    return [n, tol](double x, double t) {
        kdv::Point p(x, t);
        const double tol_eff =
            tol * std::max(1.0, 10.0 * std::pow(t, -double(n) - 1.0 / 3.0));
        return kdv::kdv_un(n, p, kdv::auto_epsilon(t), tol_eff);
    };
}

}  // namespace detail

/// Build and certify the order-n witness for the chosen equation.
inline Witness generate(Equation eq, int n, const ProbeConfig& cfg = {}) {
    const int cap = (eq == Equation::heat) ? 8 : 6;
    if (n < 1) {
        throw std::invalid_argument(
            "generate: n must be >= 1 (the 0th derivative is the unit-step "
            "solution itself, whose boundary datum is nonzero)");
    }
    if (n > cap)
        throw std::invalid_argument("generate: n exceeds the cap " + std::to_string(cap));

    Witness w;
    w.equation = eq;
    w.n = n;
    w.evaluator = detail::witness_evaluator(eq, n, cfg.quad_tol);

    verify::CandidateSolution cand;
    cand.evaluator = w.evaluator;
    cand.equation = eq;
    cand.claimed_data = data::zero();

    auto& cert = w.certificate;

    // Residual clause.
    std::vector<std::pair<double, double>> grid;
    for (double x : detail::log_space(cfg.residual_x_min, cfg.residual_x_max,
                                      cfg.residual_nx))
        for (double t : detail::log_space(cfg.residual_t_min(n), cfg.residual_t_max,
                                          cfg.residual_nt))
            grid.push_back({x, t});
    cert.residual_sup = verify::residual(cand, grid, cfg.fd);
    if (!(cert.residual_sup <= cfg.residual_tol)) {
        throw CertificationError("witness n=" + std::to_string(n) +
                                 ": residual clause failed (sup " +
                                 std::to_string(cert.residual_sup) + " > " +
                                 std::to_string(cfg.residual_tol) + ")");
    }

    // Trace clause.
    const auto t_probes = detail::log_space(cfg.trace_t_min(n), 10.0, 9);
    const auto x_probes = detail::log_space(eq == Equation::heat ? 0.3 : 2.0, 20.0, 9);
    auto traces = verify::boundary_traces(cand, cfg.trace_offsets, t_probes, x_probes);
    cert.trace_rows = traces.rows;
    cert.trace_sup_x0 = traces.trace_sup_x0;
    cert.trace_sup_t0 = traces.trace_sup_t0;
    if (!(cert.trace_sup_x0 <= cfg.trace_tol && cert.trace_sup_t0 <= cfg.trace_tol)) {
        throw CertificationError("witness n=" + std::to_string(n) +
                                 ": boundary-trace clause failed");
    }

    // Nonvanishing clause (scale-aware).
    const double expo = static_cast<double>(n);
    double metric = 0.0;
    for (double x : detail::log_space(cfg.scan_x_min, cfg.scan_x_max, cfg.scan_nx)) {
        for (double t : detail::log_space(cfg.scan_t_min, cfg.scan_t_max, cfg.scan_nt)) {
            const double v = std::abs(w.evaluator(x, t));
            metric = std::max(metric, v * std::min(1.0, std::pow(t, expo)));
            cert.max_abs = std::max(cert.max_abs, metric);
        }
    }
    cert.max_abs = metric;
    if (!(metric >= cfg.nonvanish_floor)) {
        throw CertificationError("witness n=" + std::to_string(n) +
                                 ": nonvanishing clause failed (metric " +
                                 std::to_string(metric) + ")");
    }

    // Compatibility flags of the (zero) data: trivially pass, recorded anyway.
    cert.compat_flags = verify::check_compatibility(cand.claimed_data, eq).conditions;

    // Decay probes.
    cert.decay = verify::decay_probes(cand, {5.0, 10.0, 20.0, 25.0}, {1.0, 4.0});

    // L2 exponent fit: the clause that locates which uniqueness hypothesis the
    // witness escapes. The fit must be cleanly negative.
    cert.l2 = verify::integrability_exponent(cand, cfg.l2_samples.back(),
                                             cfg.l2_samples, 1e-9);
    if (cert.l2.degenerate || !(cert.l2.p < 0.0)) {
        throw CertificationError("witness n=" + std::to_string(n) +
                                 ": L2 exponent clause failed");
    }

    cert.envelope_violation = false;
    return w;
}

struct Explanation {
    std::string text;
    verify::ordered_json json;
};

/// Human-readable + JSON rendering of the certificate: the witness solves the
/// zero-data problem, is nonzero, and its L2 mass blows up as t -> 0, so it
/// violates exactly the uniform-integrability hypothesis of the uniqueness
/// theorem; every other hypothesis holds.
inline Explanation explain(const Witness& w) {
    Explanation e;
    const auto& c = w.certificate;
    std::string eqn = verify::equation_name(w.equation);
    e.text =
        "witness u_" + std::to_string(w.n) + " (" + eqn + ")\n" +
        "  solves the zero-data problem: FD residual sup = " +
        std::to_string(c.residual_sup) + ", boundary traces (x->0, t->0) = (" +
        std::to_string(c.trace_sup_x0) + ", " + std::to_string(c.trace_sup_t0) +
        ") at offset " + std::to_string(1e-4) + "\n" +
        "  is nonzero: scale-aware max |u_n| = " + std::to_string(c.max_abs) + "\n" +
        "  fitted L2 exponent p = " + std::to_string(c.l2.p) +
        " (fit error " + std::to_string(c.l2.fit_error) + "): int |u_n|^2 dx ~ t^p " +
        "blows up as t -> 0, so the uniform-in-time L2 integrability hypothesis " +
        "of the uniqueness theorem fails; all other hypotheses hold.\n";
    e.json = verify::to_json(c);
    e.json["equation"] = eqn;
    e.json["n"] = w.n;
    e.json["violated_clause"] = "uniform_l2_integrability";
    return e;
}

}  // namespace qp::nonuniq
