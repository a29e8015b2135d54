#pragma once

// Half-line spectral transforms of the problem data. Data are supplied as
// callables plus declared derivatives and an exponential-decay envelope; the
// envelope drives half-line truncation, and a violated declaration is flagged
// loudly when tail probes exceed it.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "quarterplane/common.hpp"

namespace qp::transforms {

/// Polynomial dispersion relation omega(lambda), ascending coefficients.
struct DispersionRelation {
    std::vector<cplx> coeffs;
    std::string tag;

    cplx operator()(cplx l) const { return polyval(coeffs, l); }

    static DispersionRelation heat() {
        DispersionRelation d{{0.0, 0.0, 1.0}, "heat"};
        // omega(1) = 1, degree 2
        if (std::abs(d(1.0) - 1.0) > 1e-14 || d.coeffs.size() != 3)
            throw std::logic_error("heat dispersion invariant");
        return d;
    }
    static DispersionRelation kdv() {
        DispersionRelation d{{0.0, 0.0, 0.0, cplx(0.0, -1.0)}, "kdv"};
        // omega(1) = -i, degree 3
        if (std::abs(d(1.0) - cplx(0.0, -1.0)) > 1e-14 || d.coeffs.size() != 4)
            throw std::logic_error("kdv dispersion invariant");
        return d;
    }
};

/// The data triple (u0, g0, f) with derivative access and decay metadata.
///
/// decay_rate and amplitude declare |u0(y)|, |f(y,t)| <= amplitude *
/// exp(-decay_rate * y). g0 is declared to satisfy |g0(t)| <= g0_bound_const *
/// exp(g0_bound_growth * t). Optional closed-form transform slots let built-in
/// data bypass the quadrature path; the quadrature path remains the reference
/// implementation and is cross-checked against the closed forms in the tests.
struct HalfLineData {
    std::function<double(double)> u0;
    std::array<std::function<double(double)>, 3> u0_derivs{};  // u0', u0'', u0'''
    std::function<double(double)> g0;
    std::function<double(double)> g0_d1;
    std::function<double(double, double)> f;  // f(y, tau)

    double decay_rate = 1.0;
    double amplitude = 1.0;
    double g0_bound_const = 1.0;
    double g0_bound_growth = 0.0;
    double f_boundary_sup = 0.0;  // sup_tau |f(0,tau)|
    double f_dy_l1 = 0.0;         // sup_tau int |f_y(y,tau)| dy

    bool u0_zero = true;
    bool g0_zero = true;
    bool f_zero = true;

    std::string label = "custom";

    // closed-form overrides
    std::function<cplx(cplx)> u0_hat;                  // hat u0(lambda)
    std::vector<cplx> u0_hat_poles;                    // poles of the continuation
    std::function<cplx(cplx, double)> g0_retarded;     // int_0^t e^{-w(t-tau)} g0
    std::function<cplx(cplx, double)> f_hat;           // hat f(lambda, tau)
    std::vector<cplx> f_hat_poles;

    /// L1 bound of the declared envelope: int_0^inf amplitude e^{-delta y} dy.
    double u0_l1_bound() const { return amplitude / decay_rate; }
    /// sup of |g0| on [0, t] from the declared bound.
    double g0_sup(double t) const {
        return g0_bound_const * std::exp(std::max(0.0, g0_bound_growth) * t);
    }
};

namespace detail {

/// Shared half-line transform: int_0^inf e^{-i l y} w(y) dy for a function
/// declared to obey the data envelope. Valid for Im(l) < decay_rate; values
/// with Im(l) > 0 analytically continue the transform into the decay strip.
inline cplx half_line_transform(cplx l, const std::function<double(double)>& w,
                                const HalfLineData& data, double tol) {
    const double delta = data.decay_rate;
    const double im = l.imag();
    if (im > 0.9 * delta)
        throw std::domain_error(
            "half-line transform: Im(lambda) = " + std::to_string(im) +
            " exceeds the analyticity strip of decay rate " + std::to_string(delta));
    const double rate = delta - std::max(im, 0.0);
    const double C = std::max(data.amplitude, 1e-30);
    const double ymax = std::log(10.0 * C / std::min(tol, 0.1)) / rate;
    // Tail probes: the declaration is the user's contract.
    for (double y : {ymax, 1.25 * ymax}) {
        if (std::abs(w(y)) > 10.0 * data.amplitude * std::exp(-delta * y) + 1e-280) {
            throw DecayDeclarationError(
                "data '" + data.label + "' exceeds its declared decay envelope at y = " +
                std::to_string(y));
        }
    }
    auto r = qp::detail::adaptive_gk(
        [&](double y) { return std::exp(cplx(0.0, -1.0) * l * y) * w(y); },
        {{0.0, std::min(2.0, ymax)}, {std::min(2.0, ymax), ymax}}, tol, 2'000'000);
    if (!r.converged)
        throw NonConvergenceError("half-line transform did not converge (" +
                                  data.label + ")");
    return r.value;
}

}  // namespace detail

/// hat u0(lambda) = int_0^inf e^{-i lambda y} u0(y) dy.
/// Defined for Im(lambda) <= 0; for data with declared exponential decay the
/// transform continues analytically to Im(lambda) < decay_rate, which the
/// deformed solver contours rely on.
inline cplx hat_u0(cplx l, const HalfLineData& data, double tol) {
    if (data.u0_zero) return 0.0;
    if (data.u0_hat) return data.u0_hat(l);
    return detail::half_line_transform(l, data.u0, data, tol);
}

/// tilde g0(w, t) = int_0^t e^{w tau} g0(tau) dtau.
inline cplx tilde_g0(cplx w, double t, const HalfLineData& data, double tol) {
    if (!(t > 0.0)) throw std::domain_error("tilde_g0: t must be positive");
    if (data.g0_zero) return 0.0;
    if (data.g0_retarded) {
        // tilde = e^{w t} * retarded; safe at modest Re(w t), which is the
        // only regime where the public operation is meaningful.
        return std::exp(w * t) * data.g0_retarded(w, t);
    }
    auto r = qp::detail::adaptive_gk(
        [&](double tau) { return std::exp(w * tau) * data.g0(tau); }, {{0.0, t}}, tol,
        1'000'000);
    if (!r.converged) throw NonConvergenceError("tilde_g0 did not converge");
    return r.value;
}

/// Retarded form e^{-w t} tilde_g0(w, t) = int_0^t e^{-w (t - tau)} g0 dtau.
/// This is the combination the solution formulas actually need; it stays
/// bounded wherever Re(w) >= 0, which the solver contours guarantee.
inline cplx retarded_g0(cplx w, double t, const HalfLineData& data, double tol) {
    if (data.g0_zero) return 0.0;
    if (data.g0_retarded) return data.g0_retarded(w, t);
    auto r = qp::detail::adaptive_gk(
        [&](double tau) { return std::exp(-w * (t - tau)) * data.g0(tau); }, {{0.0, t}},
        tol, 1'000'000);
    if (!r.converged) throw NonConvergenceError("retarded_g0 did not converge");
    return r.value;
}

/// hat f(lambda, tau) = int_0^inf e^{-i lambda y} f(y, tau) dy.
inline cplx hat_f(cplx l, double tau, const HalfLineData& data, double tol) {
    if (data.f_zero) return 0.0;
    if (data.f_hat) return data.f_hat(l, tau);
    return detail::half_line_transform(
        l, [&](double y) { return data.f(y, tau); }, data, tol);
}

/// tilde f(lambda, w, t) = int_0^t e^{w tau} hat f(lambda, tau) dtau.
inline cplx tilde_f(cplx l, cplx w, double t, const HalfLineData& data, double tol) {
    if (!(t > 0.0)) throw std::domain_error("tilde_f: t must be positive");
    if (data.f_zero) return 0.0;
    const double inner_tol = tol / (10.0 * std::max(1.0, t));
    auto r = qp::detail::adaptive_gk(
        [&](double tau) { return std::exp(w * tau) * hat_f(l, tau, data, inner_tol); },
        {{0.0, t}}, tol, 1'000'000);
    if (!r.converged) throw NonConvergenceError("tilde_f did not converge");
    return r.value;
}

/// Retarded form e^{-w t} tilde_f = int_0^t e^{-w (t - tau)} hat f(l, tau) dtau.
inline cplx retarded_f(cplx l, cplx w, double t, const HalfLineData& data,
                       double tol) {
    if (data.f_zero) return 0.0;
    const double inner_tol = tol / (10.0 * std::max(1.0, t));
    auto r = qp::detail::adaptive_gk(
        [&](double tau) {
            return std::exp(-w * (t - tau)) * hat_f(l, tau, data, inner_tol);
        },
        {{0.0, t}}, tol, 1'000'000);
    if (!r.converged) throw NonConvergenceError("retarded_f did not converge");
    return r.value;
}

/// Upper bound for |hat f(lambda, tau)| on a given lambda; one integration by
/// parts supplies the 1/|lambda| falloff that the line-contour truncation needs.
inline double f_hat_bound(cplx l, const HalfLineData& data) {
    if (data.f_zero) return 0.0;
    const double flat = data.amplitude / std::max(1e-12, data.decay_rate -
                                                              std::max(0.0, l.imag()));
    const double alg = (data.f_boundary_sup + data.f_dy_l1) / std::max(1.0, std::abs(l));
    return (data.f_boundary_sup + data.f_dy_l1 > 0.0) ? std::min(flat, alg) : flat;
}

}  // namespace qp::transforms
