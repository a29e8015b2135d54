#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "quarterplane/data.hpp"
#include "quarterplane/transforms.hpp"

using namespace qp;
using namespace qp::transforms;

namespace {

/// exp-decay data without the closed-form overrides, forcing the quadrature path.
HalfLineData exp_data_quadrature(double a = 1.0) {
    HalfLineData d = data::zero();
    d.label = "exp(-" + std::to_string(a) + " y), quadrature";
    d.u0_zero = false;
    d.u0 = [a](double y) { return std::exp(-a * y); };
    d.u0_derivs = {[a](double y) { return -a * std::exp(-a * y); },
                   [a](double y) { return a * a * std::exp(-a * y); },
                   [a](double y) { return -a * a * a * std::exp(-a * y); }};
    d.decay_rate = a;
    d.amplitude = 1.0;
    return d;
}

}  // namespace

TEST_CASE("dispersion relations") {
    auto h = DispersionRelation::heat();
    auto k = DispersionRelation::kdv();
    CHECK(h(cplx(2.0, 0.0)) == cplx(4.0, 0.0));
    CHECK(std::abs(k(cplx(0.0, 1.0)) - cplx(-1.0, 0.0)) < 1e-15);  // -i (i)^3 = -1
}

TEST_CASE("hat_u0: exponential datum against the analytic transform") {
    auto d = exp_data_quadrature();
    for (double lr : {-3.0, -0.7, 0.0, 1.3, 6.0}) {
        const cplx l(lr, 0.0);
        const cplx expected = 1.0 / (1.0 + cplx(0.0, 1.0) * l);
        CHECK(std::abs(hat_u0(l, d, 1e-12) - expected) < 1e-11);
    }
    // lower half plane
    const cplx l(0.5, -2.0);
    CHECK(std::abs(hat_u0(l, d, 1e-12) - 1.0 / (1.0 + cplx(0.0, 1.0) * l)) < 1e-11);
    // strip continuation used by the shifted contours
    const cplx ls(1.0, 0.4);
    CHECK(std::abs(hat_u0(ls, d, 1e-12) - 1.0 / (1.0 + cplx(0.0, 1.0) * ls)) < 1e-10);
    // beyond the declared strip: rejected
    CHECK_THROWS_AS(hat_u0(cplx(0.0, 0.95), d, 1e-10), std::domain_error);
}

TEST_CASE("hat_u0: zero datum and Gaussian value") {
    CHECK(hat_u0(cplx(3.0, -1.0), data::zero(), 1e-12) == cplx(0.0));

    HalfLineData g = data::zero();
    g.label = "gaussian";
    g.u0_zero = false;
    g.u0 = [](double y) { return std::exp(-y * y); };
    g.decay_rate = 1.0;
    g.amplitude = 1.3;  // e^{-y^2} <= 1.3 e^{-y} for all y >= 0
    // at lambda = 0: int_0^inf e^{-y^2} dy = sqrt(pi)/2
    CHECK(std::abs(hat_u0(cplx(0.0, 0.0), g, 1e-12) - sqrt_pi / 2.0) < 1e-11);
}

TEST_CASE("declared-decay violations are flagged") {
    HalfLineData bad = data::zero();
    bad.label = "liar";
    bad.u0_zero = false;
    bad.u0 = [](double y) { return 1.0 / (1.0 + y); };  // polynomial decay only
    bad.decay_rate = 1.0;
    bad.amplitude = 1.0;
    CHECK_THROWS_AS(hat_u0(cplx(0.5, 0.0), bad, 1e-10), DecayDeclarationError);
}

TEST_CASE("tilde_g0 closed forms and quadrature") {
    auto step = data::step();
    // g0 = 1: (e^{wt} - 1)/w
    const cplx w(0.8, -0.4);
    const double t = 1.7;
    CHECK(std::abs(tilde_g0(w, t, step, 1e-12) - (std::exp(w * t) - 1.0) / w) < 1e-11);
    // w = 0 limit: t
    CHECK(std::abs(tilde_g0(cplx(0.0), t, step, 1e-12) - cplx(t)) < 1e-12);
    // zero datum
    CHECK(tilde_g0(w, t, data::zero(), 1e-12) == cplx(0.0));

    // quadrature path for g0 = e^tau against the closed form
    HalfLineData d = data::zero();
    d.g0_zero = false;
    d.g0 = [](double tau) { return std::exp(tau); };
    d.g0_d1 = d.g0;
    d.g0_bound_growth = 1.0;
    const cplx expected = (std::exp((w + 1.0) * t) - 1.0) / (w + 1.0);
    CHECK(std::abs(tilde_g0(w, t, d, 1e-12) - expected) < 1e-11);
    // retarded kernel consistency: e^{-wt} tilde = retarded
    CHECK(std::abs(retarded_g0(w, t, d, 1e-12) - std::exp(-w * t) * expected) < 1e-11);
    // exp-compat closed-form override matches its quadrature twin
    auto ec = data::exp_compat();
    CHECK(std::abs(retarded_g0(w, t, ec, 1e-12) - retarded_g0(w, t, d, 1e-12)) < 1e-11);
}

TEST_CASE("hat_f and tilde_f") {
    auto z = data::zero();
    CHECK(hat_f(cplx(1.0, 0.0), 0.3, z, 1e-12) == cplx(0.0));
    CHECK(tilde_f(cplx(1.0, 0.0), cplx(0.5), 1.0, z, 1e-12) == cplx(0.0));

    // f(y, tau) = e^{-y}: tilde_f at w = 0 equals t/(1 + i lambda)
    HalfLineData d = data::zero();
    d.f_zero = false;
    d.f = [](double y, double) { return std::exp(-y); };
    d.decay_rate = 1.0;
    d.amplitude = 1.0;
    const cplx l(1.2, -0.3);
    const double t = 0.9;
    const cplx expected = t / (1.0 + cplx(0.0, 1.0) * l);
    CHECK(std::abs(tilde_f(l, cplx(0.0), t, d, 1e-10) - expected) < 1e-9);

    // f(y, tau) = e^{-y} e^{-tau}, w = 1, t = 1: the tau-integrand is
    // constant and the transform collapses to 1/(1 + i lambda)
    auto sep = data::exp_forcing();
    const cplx expected2 = 1.0 / (1.0 + cplx(0.0, 1.0) * l);
    CHECK(std::abs(tilde_f(l, cplx(1.0), 1.0, sep, 1e-10) - expected2) < 1e-9);
    // and the closed-form f_hat override agrees with quadrature of the callable
    HalfLineData sq = sep;
    sq.f_hat = nullptr;
    CHECK(std::abs(hat_f(l, 0.6, sq, 1e-11) - sep.f_hat(l, 0.6)) < 1e-10);
}

TEST_CASE("linearity of hat_u0 on random data pairs") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    auto d1 = exp_data_quadrature(1.0);
    auto d2 = exp_data_quadrature(2.0);
    for (int k = 0; k < 5; ++k) {
        const double c1 = coef(rng), c2 = coef(rng);
        HalfLineData mix = data::zero();
        mix.u0_zero = false;
        mix.u0 = [c1, c2](double y) {
            return c1 * std::exp(-y) + c2 * std::exp(-2.0 * y);
        };
        mix.decay_rate = 1.0;
        mix.amplitude = std::abs(c1) + std::abs(c2) + 0.1;
        const cplx l(0.7, -0.5);
        const cplx lhs = hat_u0(l, mix, 1e-12);
        const cplx rhs = c1 * hat_u0(l, d1, 1e-12) + c2 * hat_u0(l, d2, 1e-12);
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("analyticity proxy: Cauchy-Riemann finite differences along Im = -c") {
    auto d = exp_data_quadrature();
    const double h = 1e-4;
    const cplx l0(0.8, -0.6);
    auto F = [&](cplx l) { return hat_u0(l, d, 1e-13); };
    const cplx dre = (F(l0 + h) - F(l0 - h)) / (2.0 * h);
    const cplx dim = (F(l0 + cplx(0.0, h)) - F(l0 - cplx(0.0, h))) / (2.0 * h);
    // d/d(im) = i d/d(re) for an analytic function
    CHECK(std::abs(dim - cplx(0.0, 1.0) * dre) < 1e-6);
}

TEST_CASE("transform bound |hat_u0| <= int |u0|") {
    auto d = exp_data_quadrature();
    for (double lr : {-4.0, -1.0, 0.3, 2.0, 9.0}) {
        for (double li : {0.0, -0.5, -3.0}) {
            CHECK(std::abs(hat_u0(cplx(lr, li), d, 1e-11)) <= 1.0 + 1e-9);
        }
    }
}
