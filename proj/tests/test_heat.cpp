#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "quarterplane/data.hpp"
#include "quarterplane/heat.hpp"
#include "quarterplane/oracle.hpp"

using namespace qp;
using heat::Point;
using heat::UVariant;
using heat::VVariant;

TEST_CASE("example1_v matches the erfc reference at the calibration point") {
    Point p(1.0, 1.0);
    const double expected = oracle::erfc_solution(1.0, 1.0);
    CHECK(heat::example1_v(p, VVariant::gamma, 1e-10) ==
          Catch::Approx(expected).margin(5e-10));
    CHECK(heat::example1_v(p, VVariant::gamma0, 1e-10) ==
          Catch::Approx(expected).margin(5e-10));
}

TEST_CASE("example1_v: stabilized paths equal the original geometry") {
    heat::Options original;
    original.original_paths = true;
    for (auto [x, t] : {std::pair{1.0, 1.0}, {0.7, 2.0}, {2.5, 0.5}}) {
        Point p(x, t);
        for (auto var : {VVariant::gamma, VVariant::gamma0}) {
            const double a = heat::example1_v(p, var, 1e-10);
            const double b = heat::example1_v(p, var, 1e-10, original);
            CHECK(a == Catch::Approx(b).margin(3e-10));
        }
    }
}

TEST_CASE("example1_v boundary behavior") {
    // x / sqrt(t) -> infinity: v -> 0
    CHECK(std::abs(heat::example1_v(Point(10.0, 0.01), VVariant::gamma, 1e-10)) <
          1e-12);
    // boundary datum: v(0+, t) = 1
    CHECK(heat::example1_v(Point(0.01, 100.0), VVariant::gamma, 1e-10) ==
          Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("example1_v oracle equivalence on a log grid") {
    // 20 x 20 log grid over (0.05, 20)^2, |v - erfc| <= 5 tol
    const double tol = 1e-10;
    const int n = 20;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x =
                std::exp(std::log(0.05) + (std::log(20.0) - std::log(0.05)) * i / (n - 1));
            const double t =
                std::exp(std::log(0.05) + (std::log(20.0) - std::log(0.05)) * j / (n - 1));
            const double v = heat::example1_v(Point(x, t), VVariant::gamma, tol);
            worst = std::max(worst, std::abs(v - oracle::erfc_solution(x, t)));
        }
    }
    CHECK(worst <= 5.0 * tol);
}

TEST_CASE("example1_u: contour and closed form agree") {
    for (auto [x, t] : {std::pair{1.0, 1.0}, {0.3, 2.0}, {4.0, 0.7}}) {
        Point p(x, t);
        const double a = heat::example1_u(p, UVariant::contour, 1e-10);
        const double b = heat::example1_u(p, UVariant::closed_form, 1e-10);
        CHECK(a == Catch::Approx(b).margin(2e-10));
    }
    CHECK(heat::example1_u(Point(1.0, 1.0), UVariant::closed_form, 1e-10) ==
          Catch::Approx(0.2196956447338612).margin(1e-15));
    // zero boundary trace: u(x -> 0+, t) -> 0
    CHECK(std::abs(heat::example1_u(Point(1e-6, 1.0), UVariant::contour, 1e-10)) <
          1e-6);
    // argmax over x at t = 1 is sqrt(2)
    CHECK(heat::example1_u(Point(std::sqrt(2.0), 1.0), UVariant::contour, 1e-10) ==
          Catch::Approx(0.2419707245191433).margin(1e-10));
}

TEST_CASE("heat_un: order validation and n = 1 coincidence") {
    CHECK_THROWS_AS(heat::heat_un(0, Point(1.0, 1.0), UVariant::closed_form, 1e-10),
                    std::invalid_argument);
    CHECK_THROWS_AS(heat::heat_un(9, Point(1.0, 1.0), UVariant::closed_form, 1e-10),
                    std::invalid_argument);
    for (auto [x, t] : {std::pair{1.0, 1.0}, {2.0, 0.5}}) {
        CHECK(heat::heat_un(1, Point(x, t), UVariant::closed_form, 1e-10) ==
              Catch::Approx(heat::example1_u(Point(x, t), UVariant::closed_form, 1e-10)));
    }
}

TEST_CASE("heat_un: closed form vs contour for n <= 6") {
    for (int n = 1; n <= 6; ++n) {
        for (auto [x, t] : {std::pair{1.0, 1.0}, {0.6, 2.3}}) {
            Point p(x, t);
            const double a = heat::heat_un(n, p, UVariant::contour, 1e-10);
            const double b = heat::heat_un(n, p, UVariant::closed_form, 1e-10);
            CHECK(a == Catch::Approx(b).margin(2e-10));
        }
    }
    // pinned n = 2 value: -1.25 e^{-1/4} / (2 sqrt(pi))
    CHECK(heat::heat_un(2, Point(1.0, 1.0), UVariant::closed_form, 1e-10) ==
          Catch::Approx(-0.2746195559173265).margin(1e-14));
}

TEST_CASE("heat_un boundary probes vanish") {
    for (int n : {1, 3}) {
        CHECK(std::abs(heat::heat_un(n, Point(1e-6, 1.0), UVariant::closed_form,
                                     1e-10)) < 1e-5);
        CHECK(std::abs(heat::heat_un(n, Point(1.0, 1e-6), UVariant::closed_form,
                                     1e-10)) < 1e-5);
    }
    // the trace limit holds for every n, but the corner layer widens with n:
    // |u_n(x, t)| ~ x t^{-n-1/2} |P_{n-1}(0)| near x = 0, so the n = 6 probe
    // sits at a larger time
    CHECK(std::abs(heat::heat_un(6, Point(1e-6, 2.5), UVariant::closed_form,
                                 1e-10)) < 1e-5);
    CHECK(std::abs(heat::heat_un(6, Point(1.0, 1e-6), UVariant::closed_form,
                                 1e-10)) < 1e-5);
}

TEST_CASE("solve_heat: unit-step datum reproduces the erfc solution") {
    auto d = data::step();
    for (auto [x, t] : {std::pair{1.0, 1.0}, {0.2, 3.0}, {5.0, 0.5}}) {
        const double u = heat::solve_heat(d, Point(x, t), 1e-10);
        CHECK(u == Catch::Approx(oracle::erfc_solution(x, t)).margin(1e-9));
    }
}

TEST_CASE("solve_heat: zero datum, conditioning floor, conjugate symmetry") {
    CHECK(heat::solve_heat(data::zero(), Point(1.0, 1.0), 1e-10) == 0.0);
    CHECK_THROWS_AS(heat::solve_heat(data::step(), Point(1.0, 5e-5), 1e-8), Error);

    // imaginary part of the assembled sum is a free error indicator
    auto terms = heat::detail::solve_heat_terms(data::step(), Point(0.8, 1.2), 1e-10,
                                                heat::Options{});
    CHECK(std::abs(terms.total.imag()) / (2.0 * pi) < 1e-9);
}

TEST_CASE("solve_heat: compatible exponential datum against the exact solution") {
    auto d = data::exp_compat();
    for (auto [x, t] : {std::pair{1.0, 1.0}, {0.5, 0.8}, {2.0, 0.5}, {3.0, 2.0}}) {
        const double u = heat::solve_heat(d, Point(x, t), 1e-10);
        CHECK(u == Catch::Approx(oracle::exp_compat_solution(x, t)).margin(2e-9));
    }
}

TEST_CASE("solve_heat: quadrature-transform data agree with the closed-form route") {
    // same datum, no closed-form overrides: exercises hat_u0 / retarded_g0
    // quadrature inside the solver
    auto d = data::exp_compat();
    auto q = d;
    q.u0_hat = nullptr;
    q.u0_hat_poles.clear();
    q.g0_retarded = nullptr;
    const double a = heat::solve_heat(d, Point(1.2, 0.9), 1e-9);
    const double b = heat::solve_heat(q, Point(1.2, 0.9), 1e-9);
    CHECK(a == Catch::Approx(b).margin(5e-8));
    CHECK(a == Catch::Approx(oracle::exp_compat_solution(1.2, 0.9)).margin(2e-8));
}

TEST_CASE("solve_heat: forcing path against a manufactured exact solution") {
    // (0, t, e^{-y}(1 - tau)) has the exact solution U = t e^{-x}
    auto d = data::manufactured_forcing();
    const double tol = 1e-7;
    for (auto [x, t] : {std::pair{1.0, 0.8}, {0.5, 1.5}, {2.0, 1.0}}) {
        const double u = heat::solve_heat(d, Point(x, t), tol);
        CHECK(u == Catch::Approx(t * std::exp(-x)).margin(1e-6));
    }
}

TEST_CASE("heat non-uniqueness linear combinations keep zero traces") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coef(-1.5, 1.5);
    const double c1 = coef(rng), c2 = coef(rng);
    auto lin = [&](double x, double t) {
        return c1 * heat::heat_un(1, Point(x, t), UVariant::closed_form, 1e-10) +
               c2 * heat::heat_un(2, Point(x, t), UVariant::closed_form, 1e-10);
    };
    for (double t : {2.0, 5.0}) CHECK(std::abs(lin(1e-4, t)) < 1e-3);
    for (double x : {0.5, 2.0}) CHECK(std::abs(lin(x, 1e-4)) < 1e-10);
    // still a heat solution: FD residual small
    const double h = 1e-3, x = 1.3, t = 2.0;
    const double rt = (lin(x, t + h) - lin(x, t - h)) / (2.0 * h);
    const double rxx = (lin(x + h, t) - 2.0 * lin(x, t) + lin(x - h, t)) / (h * h);
    CHECK(std::abs(rt - rxx) < 1e-5);
}
