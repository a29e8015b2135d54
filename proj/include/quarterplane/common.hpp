#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qp {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double sqrt_pi = 1.77245385090551602729816748334114518;
inline constexpr double sqrt2 = 1.41421356237309504880168872420969808;

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Quadrature did not reach the requested tolerance within its budget.
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

/// The integrand does not decay along a ray of the supplied path.
class DecayPreconditionError : public Error {
public:
    using Error::Error;
};

/// A declared pole lies on (or too close to) the integration path.
class PoleOnPathError : public Error {
public:
    using Error::Error;
};

/// Data violated its declared exponential-decay envelope.
class DecayDeclarationError : public Error {
public:
    using Error::Error;
};

/// A certificate clause failed during witness generation.
class CertificationError : public Error {
public:
    using Error::Error;
};

/// exp(z) - 1 without cancellation for small |z|.
inline cplx cexpm1(cplx z) {
    const double a = z.real(), b = z.imag();
    const double em = std::expm1(a);
    const double sb = std::sin(b);
    const double sh = std::sin(0.5 * b);
    return {em * std::cos(b) - 2.0 * sh * sh, (em + 1.0) * sb};
}

/// (exp(z) - 1)/z, finite at z = 0.
inline cplx phi1(cplx z) {
    if (std::abs(z) < 1e-6) {
        return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
    }
    return cexpm1(z) / z;
}

/// Horner evaluation of a polynomial with complex coefficients (ascending order).
inline cplx polyval(const std::vector<cplx>& coeffs, cplx z) {
    cplx r = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * z + *it;
    return r;
}

namespace detail {

// Gauss(7)/Kronrod(15) pair on [-1,1]; QUADPACK abscissae and weights.
inline constexpr double gk_x[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double gk_wk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double gk_wg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct PanelResult {
    cplx kronrod{0.0};
    double err = 0.0;
    double resabs = 0.0;  // Kronrod estimate of integral of |f|
};

/// One Gauss-Kronrod 15-point evaluation of f over [a,b].
template <class F>
PanelResult gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    cplx kron = 0.0, gauss = 0.0;
    double resabs = 0.0;
    {
        const cplx fc = f(c);
        kron += gk_wk[7] * fc;
        gauss += gk_wg[3] * fc;
        resabs += gk_wk[7] * std::abs(fc);
    }
    for (int j = 0; j < 7; ++j) {
        const cplx f1 = f(c - hl * gk_x[j]);
        const cplx f2 = f(c + hl * gk_x[j]);
        kron += gk_wk[j] * (f1 + f2);
        resabs += gk_wk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += gk_wg[j / 2] * (f1 + f2);
    }
    PanelResult r;
    r.kronrod = hl * kron;
    r.resabs = std::abs(hl) * resabs;
    // Plain |K - G| kept deliberately conservative, floored at rounding level.
    r.err = std::max(std::abs(hl * (kron - gauss)),
                     50.0 * std::numeric_limits<double>::epsilon() * r.resabs);
    return r;
}

struct AdaptiveResult {
    cplx value{0.0};
    double err = 0.0;
    std::size_t evals = 0;
    bool converged = false;
};

/// Globally adaptive GK15 over a union of seed intervals on the real line.
/// Panels whose error estimate has reached the rounding floor of their own
/// |f|-mass are parked: splitting cannot improve them (the floor is invariant
/// under subdivision), it only burns the evaluation budget.
template <class F>
AdaptiveResult adaptive_gk(F&& f, std::vector<std::pair<double, double>> seeds,
                           double tol, std::size_t max_evals) {
    struct Panel {
        double a, b;
        cplx val;
        double err;
        double floor;  // rounding floor 50 eps resabs
    };
    std::vector<Panel> heap, parked;
    auto cmp = [](const Panel& p, const Panel& q) { return p.err < q.err; };
    auto make_panel = [&](double a, double b) {
        auto r = gk15(f, a, b);
        return Panel{a, b, r.kronrod, r.err,
                     50.0 * std::numeric_limits<double>::epsilon() * r.resabs};
    };

    AdaptiveResult out;
    double heap_err = 0.0, parked_err = 0.0;
    for (auto [a, b] : seeds) {
        if (a == b) continue;
        heap.push_back(make_panel(a, b));
        heap_err += heap.back().err;
        std::push_heap(heap.begin(), heap.end(), cmp);
        out.evals += 15;
    }
    while (heap_err + parked_err > tol && out.evals + 30 <= max_evals &&
           !heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), cmp);
        Panel worst = heap.back();
        heap.pop_back();
        heap_err -= worst.err;
        const bool at_floor = worst.err <= 1.05 * worst.floor;
        const bool too_small =
            worst.b - worst.a <
            1e-14 * (std::abs(worst.a) + std::abs(worst.b) + 1.0);
        if (at_floor || too_small) {
            parked.push_back(worst);
            parked_err += worst.err;
            continue;
        }
        const double m = 0.5 * (worst.a + worst.b);
        out.evals += 30;
        for (Panel child : {make_panel(worst.a, m), make_panel(m, worst.b)}) {
            heap.push_back(child);
            heap_err += child.err;
            std::push_heap(heap.begin(), heap.end(), cmp);
        }
    }
    cplx v = 0.0;
    double err = 0.0;
    for (const auto& p : heap) {
        v += p.val;
        err += p.err;
    }
    for (const auto& p : parked) {
        v += p.val;
        err += p.err;
    }
    out.value = v;
    out.err = err;
    out.converged = out.err <= tol;
    return out;
}

/// Convenience: adaptive quadrature of a real-valued function over [a,b].
template <class F>
double adaptive_real(F&& f, double a, double b, double tol,
                     std::size_t max_evals = 2'000'000) {
    auto r = adaptive_gk([&](double s) { return cplx(f(s), 0.0); }, {{a, b}}, tol,
                         max_evals);
    if (!r.converged) {
        throw NonConvergenceError("real quadrature did not converge on [" +
                                  std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    return r.value.real();
}

}  // namespace detail

}  // namespace qp
