#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "quarterplane/nonuniq.hpp"
#include "quarterplane/oracle.hpp"

using namespace qp;
using nonuniq::Equation;

TEST_CASE("generate: order validation") {
    CHECK_THROWS_AS(nonuniq::generate(Equation::heat, 0), std::invalid_argument);
    CHECK_THROWS_AS(nonuniq::generate(Equation::heat, -2), std::invalid_argument);
    CHECK_THROWS_AS(nonuniq::generate(Equation::heat, 9), std::invalid_argument);
    CHECK_THROWS_AS(nonuniq::generate(Equation::kdv, 7), std::invalid_argument);
}

TEST_CASE("heat n = 1 witness") {
    auto w = nonuniq::generate(Equation::heat, 1);
    const auto& c = w.certificate;
    CHECK(c.residual_sup <= 1e-5);
    CHECK(c.trace_sup_x0 <= 1e-4);
    CHECK(c.trace_sup_t0 <= 1e-4);
    // peak of |u_1| at t = 1 is the argmax value 0.2420
    CHECK(c.max_abs >= 0.24);
    CHECK(c.max_abs <= 0.25);
    CHECK(c.l2.p == Catch::Approx(-1.5).margin(0.01));
    // evaluator delegates to the closed form
    CHECK(w.evaluator(1.0, 1.0) ==
          Catch::Approx(oracle::gauss_kernel_derivative(1.0, 1.0)));
}

TEST_CASE("kdv n = 1 witness") {
    auto w = nonuniq::generate(Equation::kdv, 1);
    CHECK(w.certificate.max_abs > 0.1);
    CHECK(w.certificate.residual_sup <= 1e-5);
    CHECK(w.certificate.l2.p < 0.0);
    // the family exponent is -5/3
    CHECK(w.certificate.l2.p == Catch::Approx(-5.0 / 3.0).margin(0.02));
}

TEST_CASE("explain renders the violated clause") {
    auto w = nonuniq::generate(Equation::heat, 1);
    auto e = nonuniq::explain(w);
    CHECK(e.text.find("uniform-in-time L2 integrability") != std::string::npos);
    CHECK(e.json["violated_clause"] == "uniform_l2_integrability");
    CHECK(e.json["equation"] == "heat");
    CHECK(e.json["n"] == 1);
    CHECK(e.json["l2_exponent_fit"]["p"].get<double>() < -1.0);
}

TEST_CASE("certificates are bit-for-bit reproducible") {
    auto a = nonuniq::generate(Equation::heat, 2);
    auto b = nonuniq::generate(Equation::heat, 2);
    CHECK(a.certificate.residual_sup == b.certificate.residual_sup);
    CHECK(a.certificate.max_abs == b.certificate.max_abs);
    CHECK(a.certificate.l2.p == b.certificate.l2.p);
    CHECK(verify::to_json(a.certificate).dump() ==
          verify::to_json(b.certificate).dump());
}

TEST_CASE("linear combinations of witnesses remain zero-data solutions") {
    auto w1 = nonuniq::generate(Equation::heat, 1);
    auto w2 = nonuniq::generate(Equation::heat, 2);
    const double c1 = 0.7, c2 = -1.3;
    verify::CandidateSolution lin;
    lin.equation = verify::Equation::heat;
    lin.claimed_data = data::zero();
    lin.evaluator = [&](double x, double t) {
        return c1 * w1.evaluator(x, t) + c2 * w2.evaluator(x, t);
    };
    std::vector<std::pair<double, double>> grid{{1.0, 3.0}, {2.0, 4.0}, {0.7, 5.0}};
    CHECK(verify::residual(lin, grid) <= 2e-5);
    auto tr = verify::boundary_traces(lin, {1e-4}, {2.5, 5.0, 10.0}, {0.5, 2.0, 10.0});
    CHECK(tr.trace_sup_x0 <= 2e-4);
    CHECK(tr.trace_sup_t0 <= 2e-4);
}

TEST_CASE("heat witnesses up to n = 6 certify") {
    for (int n = 2; n <= 6; ++n) {
        auto w = nonuniq::generate(Equation::heat, n);
        CHECK(w.certificate.residual_sup <= 1e-5);
        CHECK(w.certificate.max_abs >= 1e-2);
        CHECK(w.certificate.l2.p < 0.0);
    }
}
