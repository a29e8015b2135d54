#pragma once

// Heat-equation evaluators on the quarter plane: the unit-step solution v and
// its time derivatives (the non-uniqueness family), and the general
// five-term solution representation for data (u0, g0, f).
//
// Contour choices: the defining contours pass through the origin with rays on
// which exp(-l^2 t) is purely oscillatory. All integrands involved are
// analytic in the upper half plane, so the evaluators default to
// Cauchy-equivalent paths (rotated rays / a lowered bridge) on which the time
// factor decays like a Gaussian; original_paths = true evaluates on the
// defining geometry instead, and the test suite pins the equivalence.

#include <cmath>

#include "quarterplane/common.hpp"
#include "quarterplane/contour.hpp"
#include "quarterplane/data.hpp"
#include "quarterplane/oracle.hpp"
#include "quarterplane/transforms.hpp"

namespace qp::heat {

using transforms::HalfLineData;

struct Point {
    double x, t;
    Point(double x_, double t_) : x(x_), t(t_) {
        if (!(x > 0.0) || !(t > 0.0))
            throw std::domain_error("heat::Point: requires x > 0 and t > 0");
    }
};

enum class VVariant { gamma, gamma0 };
enum class UVariant { contour, closed_form };

struct Options {
    double ray_angle = pi / 8.0;   // rotation angle of the evaluation rays
    bool original_paths = false;   // evaluate on the original gamma / gamma0
    double min_time = 1e-4;        // solve_heat refuses smaller t (conditioning)
    int n_cap = 8;                 // heat_un order cap
    contour::IntegrationOptions quad{};
};

namespace detail {

inline contour::ComplexPath v_gamma_path(const Options& o) {
    return o.original_paths ? contour::make_heat_gamma()
                         : contour::make_heat_gamma_rotated(o.ray_angle);
}

inline contour::ComplexPath v_gamma0_path(double t, const Options& o) {
    if (o.original_paths) return contour::make_heat_gamma0();
    const double eta = std::clamp(1.0 / std::sqrt(1.0 + t), 0.15, 1.0);
    return contour::make_heat_bridge(eta, o.ray_angle, std::max(1.0, 2.0 * eta));
}

/// Bracket integrand of the unit-step solution,
/// [e^{i l x - l^2 t} - e^{i l x}] / l = e^{i l x} expm1(-l^2 t) / l,
/// entire after the removable singularity at l = 0.
inline contour::SpectralIntegrand v_bracket_integrand(double x, double t) {
    contour::SpectralIntegrand s;
    s.label = "heat v bracket";
    s.value = [x, t](cplx l) {
        const cplx w = -l * l * t;
        const cplx osc = std::exp(cplx(0.0, 1.0) * l * x);
        if (std::abs(w) < 1e-8) {
            return osc * (-l * t) * (1.0 + w * (0.5 + w / 6.0));
        }
        return osc * cexpm1(w) / l;
    };
    s.log_envelope = [x, t](cplx l) {
        const double m = std::abs(l);
        const double bracket = std::min(2.0, 3.0 * t * m * m);
        return -x * l.imag() + std::log(bracket / std::max(m, 1e-300));
    };
    return s;
}

/// Single-exponential integrand e^{i l x - l^2 t} / l (pole at the origin).
inline contour::SpectralIntegrand v_single_integrand(double x, double t) {
    contour::SpectralIntegrand s;
    s.label = "heat v single";
    s.value = [x, t](cplx l) {
        return std::exp(cplx(0.0, 1.0) * l * x - l * l * t) / l;
    };
    s.log_envelope = [x, t](cplx l) {
        return -x * l.imag() - t * (l * l).real() - std::log(std::abs(l));
    };
    s.poles = {0.0};
    return s;
}

/// (-l^2)^{n-1} l e^{i l x - l^2 t}; entire for every n >= 1.
inline contour::SpectralIntegrand un_integrand(int n, double x, double t) {
    contour::SpectralIntegrand s;
    s.label = "heat u_" + std::to_string(n);
    s.value = [n, x, t](cplx l) {
        cplx p = l;
        const cplx ml2 = -l * l;
        for (int k = 1; k < n; ++k) p *= ml2;
        return p * std::exp(cplx(0.0, 1.0) * l * x - l * l * t);
    };
    s.log_envelope = [n, x, t](cplx l) {
        const double m = std::max(std::abs(l), 1e-300);
        return -x * l.imag() - t * (l * l).real() + (2.0 * n - 1.0) * std::log(m);
    };
    return s;
}

inline cplx integrate_checked(const contour::ComplexPath& path,
                              const contour::SpectralIntegrand& f, double tol,
                              const Options& o, double* err_acc = nullptr) {
    contour::IntegrationOptions q = o.quad;
    q.tol = tol;
    auto r = contour::integrate(path, f, q);
    if (!r.converged) {
        throw NonConvergenceError("heat quadrature for '" + f.label + "' on '" +
                                  path.name + "' reached error " +
                                  std::to_string(r.abs_error_estimate) +
                                  " > tol " + std::to_string(tol));
    }
    if (err_acc) *err_acc += r.abs_error_estimate;
    return r.value;
}

}  // namespace detail

/// Unit-step boundary solution evaluated as a contour integral; both variants
/// agree with erfc(x / 2 sqrt(t)).
inline double example1_v(Point p, VVariant variant, double tol,
                         const Options& opts = {}) {
    const cplx coeff = cplx(0.0, 1.0) / pi;
    if (variant == VVariant::gamma) {
        auto path = detail::v_gamma_path(opts);
        auto f = detail::v_bracket_integrand(p.x, p.t);
        return (coeff * detail::integrate_checked(path, f, tol * pi, opts)).real();
    }
    auto path = detail::v_gamma0_path(p.t, opts);
    auto f = detail::v_single_integrand(p.x, p.t);
    return (coeff * detail::integrate_checked(path, f, tol * pi, opts)).real();
}

/// Time derivative of v; closed form (x / (2 sqrt(pi) t^{3/2})) e^{-x^2/4t}.
inline double example1_u(Point p, UVariant variant, double tol,
                         const Options& opts = {}) {
    if (variant == UVariant::closed_form)
        return oracle::gauss_kernel_derivative(p.x, p.t);
    auto path = contour::make_real_line();
    auto f = detail::un_integrand(1, p.x, p.t);
    const cplx coeff = cplx(0.0, -1.0) / pi;
    return (coeff * detail::integrate_checked(path, f, tol * pi, opts)).real();
}

namespace detail {

/// Coefficients of P_{n}(xi) with d^n/dt^n [t^{-3/2} e^{-x^2/4t}] =
/// e^{-x^2/4t} t^{-3/2-n} P_n(xi), xi = x^2/(4t);
/// P_0 = 1, P_{k+1} = (xi - (3/2 + k)) P_k - xi P_k'.
/// All coefficients are dyadic rationals, hence exact in doubles.
inline std::vector<double> un_poly(int n) {
    std::vector<double> P{1.0};
    for (int k = 0; k < n; ++k) {
        std::vector<double> Q(P.size() + 1, 0.0);
        for (std::size_t j = 0; j < P.size(); ++j) {
            Q[j + 1] += P[j];                                  // xi * P
            Q[j] -= (1.5 + k) * P[j];                          // -(3/2+k) P
            if (j >= 1) Q[j] -= static_cast<double>(j) * P[j]; // -xi P' term
        }
        P = std::move(Q);
    }
    return P;
}

inline double un_closed_form(int n, double x, double t) {
    const auto P = un_poly(n - 1);
    const double xi = x * x / (4.0 * t);
    double poly = 0.0;
    for (auto it = P.rbegin(); it != P.rend(); ++it) poly = poly * xi + *it;
    return x / (2.0 * sqrt_pi) * std::exp(-xi) *
           std::pow(t, -1.5 - (n - 1)) * poly;
}

}  // namespace detail

/// n-th time derivative of v: the non-uniqueness family for the heat problem.
inline double heat_un(int n, Point p, UVariant variant, double tol,
                      const Options& opts = {}) {
    if (n < 1 || n > opts.n_cap)
        throw std::invalid_argument("heat_un: n must satisfy 1 <= n <= " +
                                    std::to_string(opts.n_cap));
    if (variant == UVariant::closed_form) return detail::un_closed_form(n, p.x, p.t);
    auto path = contour::make_real_line();
    auto f = detail::un_integrand(n, p.x, p.t);
    const cplx coeff = cplx(0.0, -1.0) / pi;
    return (coeff * detail::integrate_checked(path, f, tol * pi, opts)).real();
}

namespace detail {

struct SolveTerms {
    cplx full_u0{0.0}, gamma_u0{0.0}, gamma_g0{0.0}, full_f{0.0}, gamma_f{0.0};
    cplx total{0.0};      // 2 pi U before taking the real part
    double err_sum = 0.0;  // accumulated quadrature error estimates
};

inline SolveTerms solve_heat_terms(const HalfLineData& data, Point p, double tol,
                                   const Options& opts) {
    const double x = p.x, t = p.t;
    if (t < opts.min_time) {
        throw Error("solve_heat: t = " + std::to_string(t) +
                    " is below the conditioning floor " + std::to_string(opts.min_time) +
                    " (the Gaussian spectral envelope degrades as t -> 0)");
    }
    int active = (!data.u0_zero) * 2 + (!data.g0_zero) + (!data.f_zero) * 2;
    if (active == 0) return {};
    const double term_tol = tol * 2.0 * pi / (active + 1);

    SolveTerms out;
    const auto line = contour::make_real_line();
    const auto gam = v_gamma_path(opts);
    const double Bu = data.u0_zero ? 0.0 : std::max(data.u0_l1_bound(), 1e-300);

    if (!data.u0_zero) {
        // int_R e^{i l x - l^2 t} hat_u0(l) dl
        contour::SpectralIntegrand s;
        s.label = "heat J_u0 full line";
        const double inner = term_tol * 1e-3;
        s.value = [&, x, t, inner](cplx l) {
            return std::exp(cplx(0.0, 1.0) * l * x - l * l * t) *
                   transforms::hat_u0(l, data, inner);
        };
        s.log_envelope = [x, t, Bu](cplx l) {
            return -x * l.imag() - t * (l * l).real() + std::log(Bu);
        };
        s.poles = data.u0_hat_poles;
        out.full_u0 = integrate_checked(line, s, term_tol, opts, &out.err_sum);

        // int_gamma e^{i l x - l^2 t} hat_u0(-l) dl
        contour::SpectralIntegrand g;
        g.label = "heat J_u0 gamma";
        g.value = [&, x, t, inner](cplx l) {
            return std::exp(cplx(0.0, 1.0) * l * x - l * l * t) *
                   transforms::hat_u0(-l, data, inner);
        };
        g.log_envelope = s.log_envelope;
        for (cplx q : data.u0_hat_poles) g.poles.push_back(-q);
        out.gamma_u0 = integrate_checked(gam, g, term_tol, opts, &out.err_sum);
    }

    if (!data.g0_zero) {
        // int_gamma e^{i l x} l [e^{-l^2 t} tilde_g0(l^2, t)] dl
        contour::SpectralIntegrand s;
        s.label = "heat J_g0 gamma";
        const double inner = term_tol * 1e-3;
        const double Gb = data.g0_sup(t);
        s.value = [&, x, t, inner](cplx l) {
            return std::exp(cplx(0.0, 1.0) * l * x) * l *
                   transforms::retarded_g0(l * l, t, data, inner);
        };
        s.log_envelope = [x, t, Gb](cplx l) {
            const double m = std::max(std::abs(l), 1e-300);
            const double rw = std::max((l * l).real(), 1e-300);
            const double kernel = std::min(t, 1.0 / rw);
            return -x * l.imag() + std::log(m * Gb * kernel + 1e-300);
        };
        out.gamma_g0 = integrate_checked(gam, s, term_tol, opts, &out.err_sum);
    }

    if (!data.f_zero) {
        const double inner = term_tol * 1e-2;
        auto kernel_bound = [t](cplx l) {
            const double rw = std::max((l * l).real(), 1e-300);
            return std::min(t, 1.0 / rw);
        };
        // int_R e^{i l x} [e^{-l^2 t} tilde_f(l, l^2, t)] dl
        contour::SpectralIntegrand s;
        s.label = "heat J_f full line";
        s.value = [&, x, t, inner](cplx l) {
            return std::exp(cplx(0.0, 1.0) * l * x) *
                   transforms::retarded_f(l, l * l, t, data, inner);
        };
        s.log_envelope = [&, x, t, kernel_bound](cplx l) {
            return -x * l.imag() +
                   std::log(transforms::f_hat_bound(l, data) * kernel_bound(l) + 1e-300);
        };
        s.poles = data.f_hat_poles;
        out.full_f = integrate_checked(line, s, term_tol, opts, &out.err_sum);

        // int_gamma e^{i l x} [e^{-l^2 t} tilde_f(-l, l^2, t)] dl
        contour::SpectralIntegrand g;
        g.label = "heat J_f gamma";
        g.value = [&, x, t, inner](cplx l) {
            return std::exp(cplx(0.0, 1.0) * l * x) *
                   transforms::retarded_f(-l, l * l, t, data, inner);
        };
        g.log_envelope = [&, x, t, kernel_bound](cplx l) {
            return -x * l.imag() +
                   std::log(transforms::f_hat_bound(-l, data) * kernel_bound(l) + 1e-300);
        };
        for (cplx q : data.f_hat_poles) g.poles.push_back(-q);
        out.gamma_f = integrate_checked(gam, g, term_tol, opts, &out.err_sum);
    }

    out.total = out.full_u0 - out.gamma_u0 - cplx(0.0, 2.0) * out.gamma_g0 +
                out.full_f - out.gamma_f;
    return out;
}

}  // namespace detail

struct SolveResult {
    double value;
    double abs_error;  // accumulated quadrature error estimate
};

/// General solution for data (u0, g0, f) at an interior point.
inline double solve_heat(const HalfLineData& data, Point p, double tol,
                         const Options& opts = {}) {
    auto terms = detail::solve_heat_terms(data, p, tol, opts);
    return terms.total.real() / (2.0 * pi);
}

/// solve_heat with the accumulated quadrature error estimate attached.
inline SolveResult solve_heat_result(const HalfLineData& data, Point p, double tol,
                                     const Options& opts = {}) {
    auto terms = detail::solve_heat_terms(data, p, tol, opts);
    return {terms.total.real() / (2.0 * pi), terms.err_sum / (2.0 * pi)};
}

}  // namespace qp::heat
