#pragma once

// Linear-KdV evaluators on the quarter plane: the unit-step solution v on the
// line Im(l) = eps, its time-derivative family, and the general solution
// assembled from the five spectral operators.
//
// The operator contours: the two full-line operators are evaluated on a line
// Im(l) = eta inside the analyticity strip of the data transforms (on the real
// axis itself exp(i l^3 t) is purely oscillatory and the integrals are only
// conditionally convergent; the upward shift is a Cauchy-equivalent on which
// they converge absolutely with a Gaussian envelope). The three boundary-term
// operators are evaluated on the sector boundary offset outward by a small
// perpendicular distance, for the same reason. Offsets are capped by the
// declared decay rate of the data, which is exactly the analyticity margin.

#include <cmath>

#include "quarterplane/common.hpp"
#include "quarterplane/contour.hpp"
#include "quarterplane/data.hpp"
#include "quarterplane/oracle.hpp"
#include "quarterplane/transforms.hpp"

namespace qp::kdv {

using transforms::HalfLineData;

struct Point {
    double x, t;
    Point(double x_, double t_) : x(x_), t(t_) {
        if (!(x > 0.0) || !(t > 0.0))
            throw std::domain_error("kdv::Point: requires x > 0 and t > 0");
    }
};

/// alpha = e^{2 pi i / 3} and the dispersion omega(l) = -i l^3.
struct Constants {
    static cplx alpha() { return {-0.5, 0.8660254037844386467637231707529362}; }
    static cplx omega(cplx l) { return cplx(0.0, -1.0) * l * l * l; }
    static constexpr double eps_default = 1.0;
};

struct Options {
    double eta = 0.0;        // 0 = choose automatically from the data decay rate
    double offset = 0.0;     // Gamma offset h; 0 = automatic
    int n_cap = 6;
    contour::IntegrationOptions quad{};
};

/// Line height giving a practical envelope at a given time; the evaluated
/// integrals are independent of the height, so this is purely a conditioning
/// choice. Two effects compete: the Gaussian falloff rate 3 t eps wants eps
/// large, while the e^{t eps^3} magnitude at the line center (which double
/// precision must cancel) wants t eps^3 small. cbrt(2/t) balances them; the
/// lower clamp keeps the line clear of the pole at the origin.
inline double auto_epsilon(double t) {
    return std::clamp(std::cbrt(2.0 / t), 0.2, 40.0);
}

namespace detail {

inline double re_omega(cplx l) { return (l * l * l).imag(); }

/// Envelope exponent Re(i l x - omega(l) t).
inline double phase_envelope(cplx l, double x, double t) {
    return -x * l.imag() - t * re_omega(l);
}

inline cplx integrate_checked(const contour::ComplexPath& path,
                              const contour::SpectralIntegrand& f, double tol,
                              const Options& o, double* err_acc = nullptr) {
    contour::IntegrationOptions q = o.quad;
    q.tol = tol;
    auto r = contour::integrate(path, f, q);
    if (!r.converged) {
        throw NonConvergenceError("kdv quadrature for '" + f.label + "' on '" +
                                  path.name + "' reached error " +
                                  std::to_string(r.abs_error_estimate) + " > tol " +
                                  std::to_string(tol));
    }
    if (err_acc) *err_acc += r.abs_error_estimate;
    return r.value;
}

/// (i l^3)^{n-1} l^p e^{i l x + i l^3 t} / l^q with (p, q) encoding the three
/// unit-step integrands: v has (0,1), u_n has (2,0) plus the power factor.
inline contour::SpectralIntegrand line_integrand(int n, bool with_inverse_l,
                                                 double x, double t) {
    contour::SpectralIntegrand s;
    s.label = with_inverse_l ? "kdv v" : ("kdv u_" + std::to_string(n));
    s.value = [n, with_inverse_l, x, t](cplx l) {
        const cplx e = std::exp(cplx(0.0, 1.0) * l * x +
                                cplx(0.0, 1.0) * l * l * l * t);
        if (with_inverse_l) return e / l;
        cplx p = l * l;
        const cplx il3 = cplx(0.0, 1.0) * l * l * l;
        for (int k = 1; k < n; ++k) p *= il3;
        return p * e;
    };
    s.log_envelope = [n, with_inverse_l, x, t](cplx l) {
        const double m = std::max(std::abs(l), 1e-300);
        const double deg = with_inverse_l ? -1.0 : (3.0 * (n - 1) + 2.0);
        return phase_envelope(l, x, t) + deg * std::log(m);
    };
    if (with_inverse_l) s.poles = {0.0};
    return s;
}

}  // namespace detail

/// Unit-step boundary solution v(x,t) evaluated on Im(l) = eps; the value is
/// independent of eps.
inline double example2_v(Point p, double eps, double tol, const Options& opts = {}) {
    if (!(eps > 0.0)) throw std::invalid_argument("example2_v: eps must be positive");
    auto path = contour::make_horizontal_line(eps);
    auto f = detail::line_integrand(0, true, p.x, p.t);
    // coefficient -3/(2 pi i) = 3i/(2 pi)
    const cplx coeff = cplx(0.0, 3.0) / (2.0 * pi);
    const double scale = 2.0 * pi / 3.0;
    return (coeff * detail::integrate_checked(path, f, tol * scale, opts)).real();
}

/// Time derivative family u_n; n = 1 is the Airy-profile witness.
inline double kdv_un(int n, Point p, double eps, double tol,
                     const Options& opts = {}) {
    if (n < 1 || n > opts.n_cap)
        throw std::invalid_argument("kdv_un: n must satisfy 1 <= n <= " +
                                    std::to_string(opts.n_cap));
    if (!(eps > 0.0)) throw std::invalid_argument("kdv_un: eps must be positive");
    auto path = contour::make_horizontal_line(eps);
    auto f = detail::line_integrand(n, false, p.x, p.t);
    const cplx coeff = cplx(-9.0 / (2.0 * pi), 0.0);
    const double scale = 2.0 * pi / 9.0;
    return (coeff * detail::integrate_checked(path, f, tol * scale, opts)).real();
}

inline double example2_u(Point p, double eps, double tol, const Options& opts = {}) {
    return kdv_un(1, p, eps, tol, opts);
}

namespace detail {

struct SolveTerms {
    cplx j0_plus{0.0}, j0_minus{0.0}, j1{0.0}, j2_plus{0.0}, j2_minus{0.0};
    cplx total{0.0};      // 2 pi U before taking the real part
    double err_sum = 0.0;  // accumulated quadrature error estimates
};

inline SolveTerms solve_kdv_terms(const HalfLineData& data, Point p, double tol,
                                  const Options& opts) {
    const double x = p.x, t = p.t;
    const cplx alpha = Constants::alpha();
    const cplx alpha2 = alpha * alpha;

    const bool needs_strip = !data.u0_zero || !data.f_zero;
    double eta = opts.eta;
    if (eta <= 0.0) eta = needs_strip ? std::min(0.45 * data.decay_rate, 1.0) : 1.0;
    double h = opts.offset;
    if (h <= 0.0) {
        h = std::min({needs_strip ? 0.45 * data.decay_rate : 1.0, 1.0,
                      6.0 / std::max(x, 1.0), std::cbrt(40.0 / (9.0 * t))});
        h = std::max(h, 0.02);
    }
    if (needs_strip && (eta > 0.9 * data.decay_rate || h > 0.9 * data.decay_rate)) {
        throw std::invalid_argument(
            "solve_kdv: contour offsets exceed the declared decay strip");
    }

    int active = (!data.u0_zero) * 2 + (!data.g0_zero) + (!data.f_zero) * 2;
    SolveTerms out;
    if (active == 0) return out;
    const double term_tol = tol * 2.0 * pi / (active + 1);

    const auto line = contour::make_horizontal_line(eta);
    const auto gam = contour::make_kdv_Gamma_offset(h);
    // Transform bound inside the strip: |hat u0| <= C / (delta - Im shift).
    const double strip = std::max(eta, h);
    const double Bu = data.u0_zero
                          ? 0.0
                          : std::max(data.amplitude /
                                         std::max(data.decay_rate - strip, 1e-12),
                                     1e-300);

    if (!data.u0_zero) {
        const double inner = term_tol * 1e-3;
        // J0+ : int e^{i l x - omega t} hat_u0(l) dl on Im l = eta
        contour::SpectralIntegrand s;
        s.label = "kdv J0+";
        s.value = [&, x, t, inner](cplx l) {
            return std::exp(cplx(0.0, 1.0) * l * x - Constants::omega(l) * t) *
                   transforms::hat_u0(l, data, inner);
        };
        s.log_envelope = [x, t, Bu](cplx l) {
            return phase_envelope(l, x, t) + std::log(Bu);
        };
        s.poles = data.u0_hat_poles;
        out.j0_plus = integrate_checked(line, s, term_tol, opts, &out.err_sum);

        // J0- : int e^{i l x - omega t} [a hat_u0(a l) + a^2 hat_u0(a^2 l)] dl on Gamma
        contour::SpectralIntegrand g;
        g.label = "kdv J0-";
        g.value = [&, x, t, inner, alpha, alpha2](cplx l) {
            return std::exp(cplx(0.0, 1.0) * l * x - Constants::omega(l) * t) *
                   (alpha * transforms::hat_u0(alpha * l, data, inner) +
                    alpha2 * transforms::hat_u0(alpha2 * l, data, inner));
        };
        g.log_envelope = [x, t, Bu](cplx l) {
            return phase_envelope(l, x, t) + std::log(2.0 * Bu);
        };
        for (cplx q : data.u0_hat_poles) {
            g.poles.push_back(q * alpha2);  // alpha l = q
            g.poles.push_back(q * alpha);   // alpha^2 l = q
        }
        out.j0_minus = integrate_checked(gam, g, term_tol, opts, &out.err_sum);
    }

    if (!data.g0_zero) {
        // J1 : int e^{i l x} 3 l^2 [e^{-omega t} tilde_g0(omega, t)] dl on Gamma
        const double inner = term_tol * 1e-3;
        const double Gb = data.g0_sup(t);
        contour::SpectralIntegrand s;
        s.label = "kdv J1";
        s.value = [&, x, t, inner](cplx l) {
            return std::exp(cplx(0.0, 1.0) * l * x) * 3.0 * l * l *
                   transforms::retarded_g0(Constants::omega(l), t, data, inner);
        };
        s.log_envelope = [x, t, Gb](cplx l) {
            const double m = std::max(std::abs(l), 1e-300);
            const double rw = re_omega(l);
            // |e^{-w(t-tau)}| <= e^{|Re w| t} below the axis; bounded since the
            // bottom segment is short and shallow.
            const double kernel =
                (rw > 0.0) ? std::min(t, 1.0 / rw) : t * std::exp(-rw * t);
            return -x * l.imag() + std::log(3.0 * m * m * Gb * kernel + 1e-300);
        };
        out.j1 = integrate_checked(gam, s, term_tol, opts, &out.err_sum);
    }

    if (!data.f_zero) {
        const double inner = term_tol * 1e-2;
        auto kernel_bound = [t](cplx l) {
            const double rw = re_omega(l);
            return (rw > 0.0) ? std::min(t, 1.0 / rw) : t * std::exp(-rw * t);
        };
        const double f_flat = data.amplitude /
                              std::max(data.decay_rate - strip, 1e-12);
        const double f_alg = data.f_boundary_sup + data.f_dy_l1;
        auto f_bound = [f_flat, f_alg](cplx l) {
            const double m = std::max(1.0, std::abs(l));
            return (f_alg > 0.0) ? std::min(f_flat, f_alg / m) : f_flat;
        };
        // J2+ : on Im l = eta
        contour::SpectralIntegrand s;
        s.label = "kdv J2+";
        s.value = [&, x, t, inner](cplx l) {
            return std::exp(cplx(0.0, 1.0) * l * x) *
                   transforms::retarded_f(l, Constants::omega(l), t, data, inner);
        };
        s.log_envelope = [x, kernel_bound, f_bound](cplx l) {
            return -x * l.imag() + std::log(f_bound(l) * kernel_bound(l) + 1e-300);
        };
        s.poles = data.f_hat_poles;
        out.j2_plus = integrate_checked(line, s, term_tol, opts, &out.err_sum);

        // J2- : rotation pair on Gamma
        contour::SpectralIntegrand g;
        g.label = "kdv J2-";
        g.value = [&, x, t, inner, alpha, alpha2](cplx l) {
            const cplx w = Constants::omega(l);
            return std::exp(cplx(0.0, 1.0) * l * x) *
                   (alpha * transforms::retarded_f(alpha * l, w, t, data, inner) +
                    alpha2 * transforms::retarded_f(alpha2 * l, w, t, data, inner));
        };
        g.log_envelope = [x, kernel_bound, f_bound](cplx l) {
            return -x * l.imag() +
                   std::log(2.0 * f_bound(l) * kernel_bound(l) + 1e-300);
        };
        for (cplx q : data.f_hat_poles) {
            g.poles.push_back(q * alpha2);
            g.poles.push_back(q * alpha);
        }
        out.j2_minus = integrate_checked(gam, g, term_tol, opts, &out.err_sum);
    }

    out.total = out.j0_plus + out.j0_minus - out.j1 + out.j2_plus + out.j2_minus;
    return out;
}

}  // namespace detail

struct SolveResult {
    double value;
    double abs_error;  // accumulated quadrature error estimate
};

/// General solution for data (u0, g0, f) at an interior point.
inline double solve_kdv(const HalfLineData& data, Point p, double tol,
                        const Options& opts = {}) {
    auto terms = detail::solve_kdv_terms(data, p, tol, opts);
    return terms.total.real() / (2.0 * pi);
}

/// solve_kdv with the accumulated quadrature error estimate attached.
inline SolveResult solve_kdv_result(const HalfLineData& data, Point p, double tol,
                                    const Options& opts = {}) {
    auto terms = detail::solve_kdv_terms(data, p, tol, opts);
    return {terms.total.real() / (2.0 * pi), terms.err_sum / (2.0 * pi)};
}

}  // namespace qp::kdv
