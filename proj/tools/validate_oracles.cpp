// One-time certification of the derived closed forms against brute-force
// quadrature of their defining line integrals. The committed output lives at
// docs/validation/oracle_validation.txt; rerun this tool to regenerate it.
//
// The brute-force route below is a plain fixed-panel Gauss-Legendre sum over
// the line Im(l) = eps with a generous truncation radius. It shares no code
// with the adaptive contour engine, so the agreement certifies both the
// closed forms and (indirectly) the engine results pinned to them.

#include <cmath>
#include <complex>
#include <cstdio>

#include "quarterplane/oracle.hpp"

using qp::cplx;

namespace {

constexpr double gl_x[8] = {-0.9602898564975363, -0.7966664774136267,
                            -0.5255324099163290, -0.1834346424956498,
                            0.1834346424956498,  0.5255324099163290,
                            0.7966664774136267,  0.9602898564975363};
constexpr double gl_w[8] = {0.1012285362903763, 0.2223810344533745,
                            0.3137066458778873, 0.3626837833783620,
                            0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

/// Brute-force integral of f over the line Im(l) = eps, |Re(l)| <= S.
template <class F>
cplx line_integral(F&& f, double eps, double S, int panels) {
    cplx acc = 0.0;
    const double h = 2.0 * S / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = -S + (p + 0.5) * h;
        for (int j = 0; j < 8; ++j) {
            acc += 0.5 * h * gl_w[j] * f(cplx(c + 0.5 * h * gl_x[j], eps));
        }
    }
    return acc;
}

}  // namespace

int main() {
    std::printf("oracle validation: derived closed forms vs brute-force line quadrature\n");
    std::printf("line Im(l) = 1, radius 12, 6000 Gauss-Legendre panels\n\n");

    int failures = 0;
    auto check = [&](const char* name, double got, double want, double tol) {
        const double err = std::abs(got - want);
        std::printf("%-34s %+.15e  vs  %+.15e   |diff| = %.2e  %s\n", name, got,
                    want, err, err <= tol ? "OK" : "MISMATCH");
        if (err > tol) ++failures;
    };

    const double eps = 1.0, S = 12.0;
    const int panels = 6000;

    // u(x,t) = -(9/2pi) int l^2 e^{i l x + i l^3 t} dl  vs  3 xi Ai(xi)/t
    for (auto [x, t] : {std::pair{1.0, 1.0}, {0.5, 2.0}, {2.0, 0.7}, {3.0, 1.5}}) {
        auto f = [x, t](cplx l) {
            return l * l * std::exp(cplx(0.0, 1.0) * l * x +
                                    cplx(0.0, 1.0) * l * l * l * t);
        };
        const double brute =
            (-9.0 / (2.0 * qp::pi) * line_integral(f, eps, S, panels)).real();
        char name[64];
        std::snprintf(name, sizeof(name), "kdv u closed form (%.1f, %.1f)", x, t);
        check(name, qp::oracle::airy_kdv_u(x, t), brute, 1e-12);
    }

    // v(x,t) = -(3/2pi i) int e^{i l x + i l^3 t} dl / l  vs  1 - 3 int_0^xi Ai
    for (auto [x, t] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {0.5, 2.0}}) {
        auto f = [x, t](cplx l) {
            return std::exp(cplx(0.0, 1.0) * l * x +
                            cplx(0.0, 1.0) * l * l * l * t) / l;
        };
        const double brute =
            (cplx(0.0, 3.0) / (2.0 * qp::pi) * line_integral(f, eps, S, panels))
                .real();
        char name[64];
        std::snprintf(name, sizeof(name), "kdv v closed form (%.1f, %.1f)", x, t);
        check(name, qp::oracle::airy_kdv_v(x, t), brute, 1e-12);
    }

    // Airy normalization: int_{Im l = 1} e^{i l^3} dl = 2 pi 3^{-1/3} Ai(0)
    {
        auto f = [](cplx l) { return std::exp(cplx(0.0, 1.0) * l * l * l); };
        const double brute = line_integral(f, eps, S, panels).real();
        const double want = 2.0 * qp::pi * std::pow(3.0, -1.0 / 3.0) *
                            qp::oracle::airy_ai(0.0);
        check("airy kernel normalization", want, brute, 1e-12);
    }

    // erfc consistency: the heat closed form u = v_t against a direct
    // real-axis Gaussian integral -(i/pi) int l e^{i l x - l^2 t} dl
    for (auto [x, t] : {std::pair{1.0, 1.0}, {2.0, 0.5}}) {
        cplx acc = 0.0;
        const double L = 14.0;
        const int np = 4000;
        const double h = 2.0 * L / np;
        for (int p = 0; p < np; ++p) {
            const double c = -L + (p + 0.5) * h;
            for (int j = 0; j < 8; ++j) {
                const cplx l(c + 0.5 * h * gl_x[j], 0.0);
                acc += 0.5 * h * gl_w[j] * l *
                       std::exp(cplx(0.0, 1.0) * l * x - l * l * t);
            }
        }
        const double brute = (cplx(0.0, -1.0) / qp::pi * acc).real();
        char name[64];
        std::snprintf(name, sizeof(name), "heat u closed form (%.1f, %.1f)", x, t);
        check(name, qp::oracle::gauss_kernel_derivative(x, t), brute, 1e-12);
    }

    std::printf("\n%s\n", failures == 0 ? "all oracle validations passed"
                                        : "ORACLE VALIDATION FAILURES");
    return failures == 0 ? 0 : 1;
}
