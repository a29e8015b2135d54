#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "quarterplane/expr.hpp"

using namespace qp;
using expr::Expression;
using expr::Jet;

TEST_CASE("jet arithmetic carries exact derivatives to third order") {
    // f(x) = x^3 at x = 2: f = 8, f' = 12, f'' = 12, f''' = 6
    const Jet x = Jet::variable(2.0);
    const Jet f = x * x * x;
    CHECK(f.value() == 8.0);
    CHECK(f.d1() == 12.0);
    CHECK(f.d2() == 12.0);
    CHECK(f.d3() == 6.0);

    // exp(-x) at 0: derivatives alternate sign
    const Jet g = expr::exp(-Jet::variable(0.0));
    CHECK(g.value() == 1.0);
    CHECK(g.d1() == -1.0);
    CHECK(g.d2() == 1.0);
    CHECK(g.d3() == -1.0);

    // quotient rule: (sin x / x) near x = 1
    const Jet q = expr::sin(Jet::variable(1.0)) / Jet::variable(1.0);
    const double s = std::sin(1.0), c = std::cos(1.0);
    CHECK(q.value() == Catch::Approx(s));
    CHECK(q.d1() == Catch::Approx(c - s));
}

TEST_CASE("expression parsing and evaluation") {
    auto e = Expression::parse("exp(-x) * (1 + x^2) - cos(x)/2");
    const double x = 0.7;
    CHECK(e("x", x) ==
          Catch::Approx(std::exp(-x) * (1.0 + x * x) - std::cos(x) / 2.0));

    // constants
    CHECK(Expression::parse("pi")("x", 0.0) == Catch::Approx(qp::pi));
    CHECK(Expression::parse("e^2")("x", 0.0) == Catch::Approx(std::exp(2.0)));

    // right-associative powers and unary minus
    CHECK(Expression::parse("2^3^2")("x", 0.0) == Catch::Approx(512.0));
    CHECK(Expression::parse("-x^2")("x", 3.0) == Catch::Approx(-9.0));

    // integer powers admit negative bases
    CHECK(Expression::parse("(-2)^3")("x", 0.0) == Catch::Approx(-8.0));
}

TEST_CASE("expression derivatives drive the corner conditions exactly") {
    // u0 = exp(-x): u0'''(0) = -1 exactly, no FD noise
    auto u0 = Expression::parse("exp(-x)");
    Expression::Env env;
    env["x"] = Jet::variable(0.0);
    const Jet j = u0.eval(env);
    CHECK(j.value() == 1.0);
    CHECK(j.d3() == -1.0);

    // g0 = e^t: g0'(0) = 1
    auto g0 = Expression::parse("exp(t)");
    Expression::Env envt;
    envt["t"] = Jet::variable(0.0);
    CHECK(g0.eval(envt).d1() == 1.0);
}

TEST_CASE("parse errors carry a location") {
    CHECK_THROWS_AS(Expression::parse("1 + * 2"), expr::ParseError);
    CHECK_THROWS_AS(Expression::parse("sin(x"), expr::ParseError);
    CHECK_THROWS_AS(Expression::parse("2 + foo(3)").operator()("x", 1.0),
                    expr::ParseError);
    try {
        Expression::parse("1 + (2 * ");
        FAIL("expected ParseError");
    } catch (const expr::ParseError& e) {
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }

    // unknown variable at evaluation time
    auto e = Expression::parse("x + y");
    CHECK_THROWS_AS(e("x", 1.0), expr::ParseError);
}

TEST_CASE("division by zero and domain errors are loud") {
    CHECK_THROWS_AS(Expression::parse("1/x")("x", 0.0), std::domain_error);
    CHECK_THROWS_AS(Expression::parse("log(x)")("x", -1.0), std::domain_error);
    CHECK_THROWS_AS(Expression::parse("sqrt(x)")("x", -4.0), std::domain_error);
}
