#pragma once

// Samplable diagnostics for the uniqueness-theorem hypotheses: PDE residual by
// finite differences, boundary-trace limits, corner compatibility conditions,
// decay probes, and the uniform-L2 integrability exponent fit.
//
// Uniform integrability is sampled, not proven: the battery reports an
// exponent fit over a time window and can refute the hypothesis (p < 0), never
// certify it.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "quarterplane/common.hpp"
#include "quarterplane/transforms.hpp"

namespace qp::verify {

using transforms::HalfLineData;
using ordered_json = nlohmann::ordered_json;

enum class Equation { heat, kdv };

inline const char* equation_name(Equation e) {
    return e == Equation::heat ? "heat" : "kdv";
}

struct CandidateSolution {
    std::function<double(double, double)> evaluator;  // (x, t) -> value
    Equation equation = Equation::heat;
    HalfLineData claimed_data;
};

struct FdSteps {
    double h_time = 1e-3;
    double h_space = 1e-3;    // first/second space derivatives
    double h_space3 = 5e-3;   // third derivative (order-4 stencil)
};

// ---------------------------------------------------------------------------
// PDE residual
// ---------------------------------------------------------------------------

/// Order-4 central stencil for the third derivative.
inline double fd3(const std::function<double(double, double)>& V, double x, double t,
                  double h) {
    return (V(x - 3 * h, t) - 8.0 * V(x - 2 * h, t) + 13.0 * V(x - h, t) -
            13.0 * V(x + h, t) + 8.0 * V(x + 2 * h, t) - V(x + 3 * h, t)) /
           (8.0 * h * h * h);
}

/// Pointwise FD residual: heat u_t - u_xx - f, kdv u_t + u_xxx - f.
inline double residual_at(const CandidateSolution& c, double x, double t,
                          const FdSteps& s = {}) {
    const auto& V = c.evaluator;
    const double ut = (V(x, t + s.h_time) - V(x, t - s.h_time)) / (2.0 * s.h_time);
    const double fval = c.claimed_data.f_zero ? 0.0 : c.claimed_data.f(x, t);
    if (c.equation == Equation::heat) {
        const double uxx =
            (V(x + s.h_space, t) - 2.0 * V(x, t) + V(x - s.h_space, t)) /
            (s.h_space * s.h_space);
        return ut - uxx - fval;
    }
    return ut + fd3(V, x, t, s.h_space3) - fval;
}

/// Sup of |residual| over a probe grid; every point must keep a margin of
/// four steps from the boundary.
inline double residual(const CandidateSolution& c,
                       const std::vector<std::pair<double, double>>& grid,
                       const FdSteps& s = {}) {
    const double hx = std::max(s.h_space, s.h_space3);
    double sup = 0.0;
    for (auto [x, t] : grid) {
        if (x < 4.0 * hx || t < 4.0 * s.h_time)
            throw std::invalid_argument("residual: grid point too close to boundary");
        sup = std::max(sup, std::abs(residual_at(c, x, t, s)));
    }
    return sup;
}

// ---------------------------------------------------------------------------
// boundary traces
// ---------------------------------------------------------------------------

struct TraceRow {
    double offset;
    double sup_x0;  // sup_t |V(offset, t) - g0(t)|
    double sup_t0;  // sup_x |V(x, offset) - u0(x)|
};

struct TraceReport {
    std::vector<TraceRow> rows;  // per offset, decreasing
    double trace_sup_x0 = 0.0;   // at the smallest offset
    double trace_sup_t0 = 0.0;
};

inline TraceReport boundary_traces(const CandidateSolution& c,
                                   const std::vector<double>& offsets,
                                   const std::vector<double>& t_probes,
                                   const std::vector<double>& x_probes) {
    TraceReport rep;
    for (double off : offsets) {
        TraceRow row{off, 0.0, 0.0};
        for (double t : t_probes) {
            const double g = c.claimed_data.g0_zero ? 0.0 : c.claimed_data.g0(t);
            row.sup_x0 = std::max(row.sup_x0, std::abs(c.evaluator(off, t) - g));
        }
        for (double x : x_probes) {
            const double u = c.claimed_data.u0_zero ? 0.0 : c.claimed_data.u0(x);
            row.sup_t0 = std::max(row.sup_t0, std::abs(c.evaluator(x, off) - u));
        }
        rep.rows.push_back(row);
    }
    rep.trace_sup_x0 = rep.rows.back().sup_x0;
    rep.trace_sup_t0 = rep.rows.back().sup_t0;
    return rep;
}

// ---------------------------------------------------------------------------
// corner compatibility
// ---------------------------------------------------------------------------

struct CompatCondition {
    std::string name;
    double residual;
    bool pass;
};

struct CompatFlags {
    std::vector<CompatCondition> conditions;
    bool all_pass = true;
};

/// Corner conditions from data derivatives alone; no solution evaluation.
/// heat: u0(0) = g0(0) and u0''(0) + f(0,0) = g0'(0)
/// kdv:  u0(0) = g0(0) and g0'(0) = -u0'''(0) + f(0,0)
inline CompatFlags check_compatibility(const HalfLineData& data, Equation eq,
                                       double threshold = 1e-10) {
    auto need = [&](const std::function<double(double)>& fn, const char* what) {
        if (!fn) throw std::invalid_argument(std::string("check_compatibility: data '") +
                                             data.label + "' lacks " + what);
    };
    need(data.u0, "u0");
    need(data.g0, "g0");
    need(data.g0_d1, "g0'");
    const double f00 = data.f_zero ? 0.0 : data.f(0.0, 0.0);

    CompatFlags out;
    auto add = [&](std::string name, double r) {
        const bool ok = std::abs(r) <= threshold;
        out.conditions.push_back({std::move(name), r, ok});
        out.all_pass = out.all_pass && ok;
    };
    add("u0(0) = g0(0)", data.u0(0.0) - data.g0(0.0));
    if (eq == Equation::heat) {
        need(data.u0_derivs[1], "u0''");
        add("u0''(0) + f(0,0) = g0'(0)",
            data.u0_derivs[1](0.0) + f00 - data.g0_d1(0.0));
    } else {
        need(data.u0_derivs[2], "u0'''");
        add("g0'(0) = -u0'''(0) + f(0,0)",
            data.g0_d1(0.0) - (-data.u0_derivs[2](0.0) + f00));
    }
    return out;
}

// ---------------------------------------------------------------------------
// uniform-L2 integrability exponent
// ---------------------------------------------------------------------------

struct IntegrabilityFit {
    double p = 0.0;
    double fit_error = 0.0;
    bool degenerate = false;  // identically-zero samples, no fit possible
    std::vector<std::pair<double, double>> samples;  // (t, I(t))
};

/// I(t) = int_0^inf V(x,t)^2 dx for each sample, then least-squares fit of
/// log I = p log t + c. p < 0 (beyond the fit error) refutes the uniform
/// integrability hypothesis; p >= 0 is merely consistent with it.
inline IntegrabilityFit integrability_exponent(const CandidateSolution& c, double T,
                                               std::vector<double> t_samples,
                                               double quad_tol = 1e-9) {
    if (t_samples.size() < 4)
        throw std::invalid_argument("integrability_exponent: need >= 4 samples");
    IntegrabilityFit fit;
    for (double t : t_samples) {
        if (!(t > 0.0 && t <= T))
            throw std::invalid_argument("integrability_exponent: samples must lie in (0, T]");
        // Scale estimate: the fit lives on log I, so the per-sample tolerance
        // is relative to the sample's own magnitude.
        double peak2 = 0.0;
        for (int i = 0; i < 16; ++i) {
            const double x = std::exp(std::log(1e-3) + i * (std::log(8.0) - std::log(1e-3)) / 15.0);
            const double v = c.evaluator(x, t);
            peak2 = std::max(peak2, v * v);
        }
        // March the upper limit until the integrand envelope is negligible.
        double X = 8.0;
        const double floor = std::max(quad_tol, 1e-10 * peak2) * 1e-3;
        while (X < 1e4) {
            const double v = c.evaluator(X, t);
            if (v * v * X < floor) break;
            X *= 2.0;
        }
        const double tol_eff = std::max(quad_tol, 1e-9 * peak2 * X);
        const double I = qp::detail::adaptive_real(
            [&](double x) {
                const double v = c.evaluator(x, t);
                return v * v;
            },
            1e-9, X, tol_eff);
        fit.samples.push_back({t, I});
    }
    double Imax = 0.0;
    for (auto& [t, I] : fit.samples) Imax = std::max(Imax, I);
    if (Imax <= 1e-200) {
        fit.degenerate = true;
        return fit;
    }
    // least squares on (log t, log I)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(fit.samples.size());
    for (auto& [t, I] : fit.samples) {
        const double lx = std::log(t), ly = std::log(std::max(I, 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    fit.p = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double cst = (sy - fit.p * sx) / n;
    for (auto& [t, I] : fit.samples) {
        fit.fit_error = std::max(
            fit.fit_error, std::abs(std::log(std::max(I, 1e-300)) -
                                    (fit.p * std::log(t) + cst)));
    }
    return fit;
}

// ---------------------------------------------------------------------------
// decay probes
// ---------------------------------------------------------------------------

struct DecayRow {
    double x, t;
    double v, vx, vxx;  // vxx only populated for kdv candidates
};

struct DecayRecord {
    std::vector<DecayRow> rows;
    bool decays = true;  // |V| falls off along increasing x at each t probe
};

inline DecayRecord decay_probes(const CandidateSolution& c,
                                const std::vector<double>& x_list,
                                const std::vector<double>& t_probes,
                                double h = 1e-3) {
    if (x_list.size() < 2 || x_list.back() < 20.0)
        throw std::invalid_argument("decay_probes: x_list must increase beyond 20");
    DecayRecord rec;
    for (double t : t_probes) {
        double first = 0.0, last = 0.0, prev = std::numeric_limits<double>::infinity();
        bool monotone = true;
        for (double x : x_list) {
            DecayRow row{x, t, 0.0, 0.0, 0.0};
            row.v = c.evaluator(x, t);
            row.vx = (c.evaluator(x + h, t) - c.evaluator(x - h, t)) / (2.0 * h);
            if (c.equation == Equation::kdv) {
                row.vxx = (c.evaluator(x + h, t) - 2.0 * row.v +
                           c.evaluator(x - h, t)) /
                          (h * h);
            }
            if (std::abs(row.v) > prev + 1e-12) monotone = false;
            prev = std::abs(row.v);
            if (x == x_list.front()) first = std::abs(row.v);
            last = std::abs(row.v);
            rec.rows.push_back(row);
        }
        // genuine decay requires both monotonicity and an actual drop
        if (!monotone || last > 1e-6 * (first + 1e-300) + 1e-300) rec.decays = false;
    }
    return rec;
}

// ---------------------------------------------------------------------------
// aggregate report
// ---------------------------------------------------------------------------

struct VerificationReport {
    double residual_sup = 0.0;
    double trace_sup_x0 = 0.0;
    double trace_sup_t0 = 0.0;
    std::vector<TraceRow> trace_rows;
    std::vector<CompatCondition> compat_flags;
    DecayRecord decay;
    IntegrabilityFit l2;
    bool envelope_violation = false;
    double max_abs = 0.0;  // nonvanishing metric over the probe grid
};

/// Probe the claimed data against its own declared decay envelope.
inline bool envelope_violated(const HalfLineData& data) {
    if (data.u0_zero && data.f_zero) return false;
    for (double y : {5.0, 10.0, 20.0, 40.0}) {
        const double env = 10.0 * data.amplitude * std::exp(-data.decay_rate * y) + 1e-280;
        if (!data.u0_zero && std::abs(data.u0(y)) > env) return true;
        if (!data.f_zero && (std::abs(data.f(y, 0.5)) > env || std::abs(data.f(y, 2.0)) > env))
            return true;
    }
    return false;
}

inline ordered_json to_json(const VerificationReport& r) {
    ordered_json j;
    j["residual_sup"] = r.residual_sup;
    j["trace_sup_x0"] = r.trace_sup_x0;
    j["trace_sup_t0"] = r.trace_sup_t0;
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.trace_rows) {
        rows.push_back({{"offset", row.offset},
                        {"sup_x0", row.sup_x0},
                        {"sup_t0", row.sup_t0}});
    }
    j["trace_rows"] = rows;
    ordered_json compat = ordered_json::array();
    for (const auto& c : r.compat_flags) {
        compat.push_back({{"condition", c.name}, {"residual", c.residual},
                          {"pass", c.pass}});
    }
    j["compat_flags"] = compat;
    ordered_json decay = ordered_json::array();
    for (const auto& row : r.decay.rows) {
        decay.push_back({{"x", row.x}, {"t", row.t}, {"V", row.v},
                         {"Vx", row.vx}, {"Vxx", row.vxx}});
    }
    j["decay_probes"] = decay;
    j["decay_monotone"] = r.decay.decays;
    if (r.l2.degenerate) {
        j["l2_exponent_fit"] = {{"degenerate", true}};
    } else {
        ordered_json samples = ordered_json::array();
        for (auto& [t, I] : r.l2.samples) samples.push_back({{"t", t}, {"I", I}});
        j["l2_exponent_fit"] = {{"p", r.l2.p},
                                {"fit_error", r.l2.fit_error},
                                {"samples", samples}};
    }
    j["envelope_violation"] = r.envelope_violation;
    j["max_abs"] = r.max_abs;
    return j;
}

}  // namespace qp::verify
