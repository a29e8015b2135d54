#pragma once

// Closed-form reference solutions used to calibrate contour orientation and to
// certify quadrature accuracy. Nothing in this header may touch the contour
// engine; each special function is evaluated by two independent algorithms.

#include <array>
#include <cmath>
#include <stdexcept>

#include "quarterplane/common.hpp"

namespace qp::oracle {

// ---------------------------------------------------------------------------
// complementary error function
// ---------------------------------------------------------------------------

/// erfc via the Maclaurin series of erf (accurate for z <= ~2.5).
inline double erfc_series(double z) {
    const bool neg = z < 0.0;
    const double a = std::abs(z);
    double term = a, sum = a;
    const double a2 = a * a;
    for (int k = 1; k < 200; ++k) {
        term *= -a2 / k;
        const double add = term / (2 * k + 1);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    const double erf = 2.0 / sqrt_pi * sum;
    return neg ? 1.0 + erf : 1.0 - erf;
}

/// erfc via the Laplace continued fraction (modified Lentz), for z >= ~1.
inline double erfc_continued_fraction(double z) {
    if (z < 0.5) throw std::domain_error("erfc_continued_fraction: z too small");
    if (z > 26.5) return 0.0;  // below double underflow once multiplied out
    // erfc(z) = exp(-z^2)/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
    const double tiny = 1e-300;
    double f = z, C = z, D = 0.0;
    for (int k = 1; k < 400; ++k) {
        const double a = 0.5 * k;  // numerators 1/2, 1, 3/2, ...
        D = z + a * D;
        if (std::abs(D) < tiny) D = tiny;
        C = z + a / C;
        if (std::abs(C) < tiny) C = tiny;
        D = 1.0 / D;
        const double delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-17) break;
    }
    return std::exp(-z * z) / sqrt_pi / f;
}

/// Best-of-both erfc; the two routes are cross-checked in the test suite.
inline double erfc(double z) {
    if (z < 1.5) return erfc_series(z);
    return erfc_continued_fraction(z);
}

/// Classical solution of the unit-step boundary problem for the heat
/// equation on the half line: erfc(x / (2 sqrt(t))).
inline double erfc_solution(double x, double t) {
    if (!(t > 0.0)) throw std::domain_error("erfc_solution: t must be positive");
    if (x < 0.0) throw std::domain_error("erfc_solution: x must be >= 0");
    return erfc(x / (2.0 * std::sqrt(t)));
}

// ---------------------------------------------------------------------------
// Airy function Ai on [0, inf)
// ---------------------------------------------------------------------------

inline constexpr double gamma_one_third = 2.67893853470774763365569294097;
inline constexpr double gamma_two_thirds = 1.35411793942640041694528802815;

/// Ai(0) = 3^{-2/3} / Gamma(2/3)
inline const double airy_ai0 = std::pow(3.0, -2.0 / 3.0) / gamma_two_thirds;
/// Ai'(0) = -3^{-1/3} / Gamma(1/3)
inline const double airy_aip0 = -std::pow(3.0, -1.0 / 3.0) / gamma_one_third;

/// Ai by the global Maclaurin series Ai = c1 f - c2 g (usable for z <= ~5).
inline double airy_ai_series(double z) {
    // f: c_{k+3} = c_k / ((k+2)(k+3)) starting from c_0 = 1
    // g: c_{k+3} = c_k / ((k+2)(k+3)) starting from c_1 = 1
    const double z3 = z * z * z;
    double tf = 1.0, f = 1.0;
    double tg = z, g = z;
    for (int k = 0; k < 120; ++k) {
        const int n = 3 * k;
        tf *= z3 / ((n + 2.0) * (n + 3.0));
        tg *= z3 / ((n + 3.0) * (n + 4.0));
        f += tf;
        g += tg;
        if (std::abs(tf) + std::abs(tg) < 1e-19 * (std::abs(f) + std::abs(g))) break;
    }
    return airy_ai0 * f + airy_aip0 * g;
}

/// Ai by the large-argument asymptotic expansion (z >= ~5).
inline double airy_ai_asymptotic(double z) {
    if (z < 4.0) throw std::domain_error("airy_ai_asymptotic: z too small");
    const double zeta = 2.0 / 3.0 * std::pow(z, 1.5);
    if (zeta > 740.0) return 0.0;  // underflow
    // u_{k+1} = u_k (3k+1/2)(3k+3/2)(3k+5/2) / (54 (k+1)(k+1/2))
    double u = 1.0, sum = 1.0, prev = 1.0;
    for (int k = 0; k < 60; ++k) {
        u *= (3 * k + 0.5) * (3 * k + 1.5) * (3 * k + 2.5) /
             (54.0 * (k + 1.0) * (k + 0.5));
        const double term = ((k % 2 == 0) ? -1.0 : 1.0) * u / std::pow(zeta, k + 1);
        if (std::abs(term) > std::abs(prev)) break;  // divergent tail reached
        sum += term;
        prev = term;
        if (std::abs(term) < 1e-19 * std::abs(sum)) break;
    }
    return std::exp(-zeta) / (2.0 * sqrt_pi * std::pow(z, 0.25)) * sum;
}

/// Ai'(z) by the large-argument asymptotic expansion (z >= ~9).
inline double airy_aip_asymptotic(double z) {
    if (z < 8.0) throw std::domain_error("airy_aip_asymptotic: z too small");
    const double zeta = 2.0 / 3.0 * std::pow(z, 1.5);
    if (zeta > 740.0) return 0.0;
    // Ai'(z) = -(z^{1/4} e^{-zeta} / (2 sqrt(pi))) sum (-1)^k v_k / zeta^k,
    // v_0 = 1, v_k = (6k+1)/(1-6k) u_k.
    double u = 1.0, sum = 1.0, prev = 1.0;
    for (int k = 0; k < 60; ++k) {
        u *= (3 * k + 0.5) * (3 * k + 1.5) * (3 * k + 2.5) /
             (54.0 * (k + 1.0) * (k + 0.5));
        const double v = u * (6.0 * (k + 1) + 1.0) / (1.0 - 6.0 * (k + 1));
        const double term = ((k % 2 == 0) ? -1.0 : 1.0) * v / std::pow(zeta, k + 1);
        if (std::abs(term) > std::abs(prev)) break;
        sum += term;
        prev = term;
        if (std::abs(term) < 1e-19 * std::abs(sum)) break;
    }
    return -std::exp(-zeta) * std::pow(z, 0.25) / (2.0 * sqrt_pi) * sum;
}

namespace detail {

struct AiryState {
    double ai, aip, integral;  // integral accumulates along the march
};

/// Taylor-series march of y'' = z y from z0 to z1 (either direction),
/// carrying (Ai, Ai') and the running integral of Ai.
inline AiryState airy_march_between(double z0, double z1, double ai, double aip) {
    AiryState st{ai, aip, 0.0};
    const double dir = (z1 >= z0) ? 1.0 : -1.0;
    double z = z0;
    while (dir * (z1 - z) > 1e-15) {
        const double h = dir * std::min(0.25, dir * (z1 - z));
        // Taylor coefficients about z: (n+2)(n+1) c_{n+2} = z c_n + c_{n-1}
        std::array<double, 30> c{};
        c[0] = st.ai;
        c[1] = st.aip;
        for (int n = 0; n + 2 < static_cast<int>(c.size()); ++n) {
            const double lower = (n >= 1) ? c[n - 1] : 0.0;
            c[n + 2] = (z * c[n] + lower) / ((n + 2.0) * (n + 1.0));
        }
        double y = 0.0, yp = 0.0, yint = 0.0;
        for (int n = static_cast<int>(c.size()) - 1; n >= 0; --n) {
            y = y * h + c[n];
            yint = yint * h + c[n] / (n + 1.0);
        }
        yint *= h;
        for (int n = static_cast<int>(c.size()) - 1; n >= 1; --n) {
            yp = yp * h + n * c[n];
        }
        st.integral += yint;
        st.ai = y;
        st.aip = yp;
        z += h;
    }
    return st;
}

/// Machine-accurate seeds at z = 12 from the asymptotic expansions
/// (zeta ~ 27.7, smallest term ~ e^{-2 zeta}).
inline const AiryState& airy_seed12() {
    static const AiryState s{airy_ai_asymptotic(12.0), airy_aip_asymptotic(12.0), 0.0};
    return s;
}

/// Tail integral int_z^inf Ai via the ODE-based integration by parts
/// T_m := int_z^inf Ai / s^m = -Ai'(z)/z^{m+1} - (m+1) Ai(z)/z^{m+2}
///        + (m+1)(m+2) T_{m+3};   valid and rapidly shrinking for z >= ~10.
inline double airy_tail(double z, double ai, double aip) {
    double acc = 0.0, coef = 1.0;
    for (int m = 0; m <= 9; m += 3) {
        acc += coef * (-aip / std::pow(z, m + 1.0) - (m + 1.0) * ai / std::pow(z, m + 2.0));
        coef *= (m + 1.0) * (m + 2.0);
    }
    return acc;
}

}  // namespace detail

/// Ai via the ODE march (independent cross-check method).
/// Marches upward from the exact origin constants below z = 4 (stable there),
/// downward from asymptotic seeds at z = 12 otherwise.
inline double airy_ai_march(double z) {
    if (z <= 4.0)
        return detail::airy_march_between(0.0, z, airy_ai0, airy_aip0).ai;
    const auto& s = detail::airy_seed12();
    return detail::airy_march_between(12.0, z, s.ai, s.aip).ai;
}

/// Primary Ai evaluation: Maclaurin series below 2 (no cancellation there),
/// downward Taylor march on (2, 12) -- the stable direction for the decaying
/// solution -- and the asymptotic expansion beyond.
inline double airy_ai(double z) {
    if (z < 0.0) throw std::domain_error("airy_ai: negative argument unsupported");
    if (z <= 2.0) return airy_ai_series(z);
    if (z < 12.0) {
        const auto& s = detail::airy_seed12();
        return detail::airy_march_between(12.0, z, s.ai, s.aip).ai;
    }
    return airy_ai_asymptotic(z);
}

/// Ai'(z) with the same branch structure as airy_ai.
inline double airy_aip(double z) {
    if (z < 0.0) throw std::domain_error("airy_aip: negative argument unsupported");
    if (z <= 2.0) return detail::airy_march_between(0.0, z, airy_ai0, airy_aip0).aip;
    if (z < 12.0) {
        const auto& s = detail::airy_seed12();
        return detail::airy_march_between(12.0, z, s.ai, s.aip).aip;
    }
    return airy_aip_asymptotic(z);
}

/// int_0^z Ai(s) ds.
inline double airy_ai_integral(double z) {
    if (z < 0.0) throw std::domain_error("airy_ai_integral: negative argument");
    if (z <= 3.0)
        return detail::airy_march_between(0.0, z, airy_ai0, airy_aip0).integral;
    if (z < 12.0) {
        const auto& s = detail::airy_seed12();
        const auto down = detail::airy_march_between(12.0, z, s.ai, s.aip);
        const double tail12 = detail::airy_tail(12.0, s.ai, s.aip);
        // int_0^z = 1/3 - int_z^inf, with int_z^inf = int_z^12 + tail(12)
        return 1.0 / 3.0 - (-down.integral + tail12);
    }
    const double ai = airy_ai_asymptotic(z);
    const double aip = airy_aip_asymptotic(z);
    return 1.0 / 3.0 - detail::airy_tail(z, ai, aip);
}

// ---------------------------------------------------------------------------
// closed-form references for the two model problems
// ---------------------------------------------------------------------------

/// x-derivative of the Gauss kernel (up to constant):
/// (1/(2 sqrt(pi))) * (x / t^{3/2}) * exp(-x^2/(4t)).
inline double gauss_kernel_derivative(double x, double t) {
    if (!(t > 0.0)) throw std::domain_error("gauss_kernel_derivative: t <= 0");
    return x / (2.0 * sqrt_pi * t * std::sqrt(t)) * std::exp(-x * x / (4.0 * t));
}

/// int_0^inf (x t^{-3/2} exp(-x^2/4t))^2 dx = sqrt(pi/2) t^{-3/2}.
inline double gauss_kernel_l2_unscaled(double t) {
    return std::sqrt(pi / 2.0) / (t * std::sqrt(t));
}

/// L2 norm (squared) of gauss_kernel_derivative over x at fixed t.
inline double gauss_kernel_l2(double t) {
    return gauss_kernel_l2_unscaled(t) / (4.0 * pi);
}

/// Derived closed form of the linear-KdV unit-step time derivative:
/// u(x,t) = 3 xi Ai(xi) / t with xi = x (3t)^{-1/3}.
/// Certified once against brute-force quadrature of the defining line
/// integral (see tools/validate_oracles and the committed validation output).
inline double airy_kdv_u(double x, double t) {
    if (!(t > 0.0)) throw std::domain_error("airy_kdv_u: t <= 0");
    if (x < 0.0) throw std::domain_error("airy_kdv_u: x < 0");
    const double xi = x * std::pow(3.0 * t, -1.0 / 3.0);
    return 3.0 * xi * airy_ai(xi) / t;
}

/// Self-similar closed form of the linear-KdV unit-step solution:
/// v(x,t) = 1 - 3 int_0^xi Ai(s) ds, xi = x (3t)^{-1/3}.
inline double airy_kdv_v(double x, double t) {
    if (!(t > 0.0)) throw std::domain_error("airy_kdv_v: t <= 0");
    if (x < 0.0) throw std::domain_error("airy_kdv_v: x < 0");
    const double xi = x * std::pow(3.0 * t, -1.0 / 3.0);
    return 1.0 - 3.0 * airy_ai_integral(xi);
}

/// d/dt of airy_kdv_u: -(4 xi Ai(xi) + xi^2 Ai'(xi)) / t^2.
inline double airy_kdv_u2(double x, double t) {
    const double xi = x * std::pow(3.0 * t, -1.0 / 3.0);
    return -(4.0 * xi * airy_ai(xi) + xi * xi * airy_aip(xi)) / (t * t);
}

/// Exact solution of both model equations for the compatible datum
/// (u0, g0, f) = (e^{-x}, e^t, 0): U(x,t) = e^{t-x}.
inline double exp_compat_solution(double x, double t) { return std::exp(t - x); }

}  // namespace qp::oracle
