#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mflq/errors.hpp"
#include "mflq/exhaustible.hpp"
#include "mflq/model.hpp"
#include "mflq/rng.hpp"

using namespace mflq;
using testing::m1;

TEST_SUITE("model") {

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(TimeGrid(0.0, 0.0, 10), StructuralError);
    CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 1), StructuralError);
    TimeGrid g(0.0, 1.0, 4);
    CHECK(g.dt() == doctest::Approx(0.25));
    CHECK(g.node(4) == doctest::Approx(1.0));
    for (int k = 0; k < 4; ++k) CHECK(g.node(k) < g.node(k + 1));
}

TEST_CASE("identity cost matrices pass with unit margins") {
    CoefficientSet cs = CoefficientSet::zeros(1, 1, TimeGrid(0.0, 1.0, 10));
    cs.Q = CoefficientSchedule::constant(m1(1.0));
    cs.R = CoefficientSchedule::constant(m1(1.0));
    cs.H = m1(1.0);
    const AssumptionReport rep = validate_assumptions(cs);
    CHECK(rep.passed());
    CHECK(rep.delta1 == doctest::Approx(1.0));
    CHECK(rep.delta2 == doctest::Approx(1.0));
    CHECK(rep.violations.empty());
}

TEST_CASE("discounted control weight: margin is the discounted endpoint") {
    CoefficientSet cs = CoefficientSet::zeros(1, 1, TimeGrid(0.0, 1.0, 10));
    cs.Q = CoefficientSchedule::constant(m1(1.0));
    cs.R = CoefficientSchedule::exp_discount(m1(1.0), 0.1);
    cs.H = m1(1.0);
    const AssumptionReport rep = validate_assumptions(cs);
    CHECK(rep.passed());
    // min over the grid of e^{-0.1 (s - t0)} is attained at s = T
    CHECK(rep.delta2 == doctest::Approx(std::exp(-0.1)).epsilon(1e-12));
}

TEST_CASE("negative aggregate control weight is flagged") {
    CoefficientSet cs = CoefficientSet::zeros(1, 1, TimeGrid(0.0, 1.0, 10));
    cs.Q = CoefficientSchedule::constant(m1(1.0));
    cs.R = CoefficientSchedule::constant(m1(1.0));
    cs.Rbar = CoefficientSchedule::constant(m1(-2.0));
    cs.H = m1(1.0);
    const AssumptionReport rep = validate_assumptions(cs);
    CHECK_FALSE(rep.passed());
    bool found = false;
    for (const auto& v : rep.violations)
        if (v.check == "R + Rbar >= delta2 I") found = true;
    CHECK(found);
}

TEST_CASE("non-symmetric cost matrix is a structural error, not a failed check") {
    CoefficientSet cs = CoefficientSet::zeros(2, 1, TimeGrid(0.0, 1.0, 4));
    Eigen::MatrixXd Q(2, 2);
    Q << 1.0, 0.5, 0.0, 1.0;
    cs.Q = CoefficientSchedule::constant(Q);
    cs.R = CoefficientSchedule::constant(m1(1.0));
    CHECK_THROWS_AS(validate_assumptions(cs), StructuralError);
}

TEST_CASE("zero delta1 admissible only without cross terms") {
    CoefficientSet cs = CoefficientSet::zeros(1, 1, TimeGrid(0.0, 1.0, 4));
    cs.R = CoefficientSchedule::constant(m1(1.0));
    CHECK(validate_assumptions(cs).passed());  // Q = S = 0
    cs.S = CoefficientSchedule::constant(m1(0.1));
    const AssumptionReport rep = validate_assumptions(cs);
    CHECK_FALSE(rep.passed());
    CHECK_FALSE(rep.s_ok);
}

TEST_CASE("cross-term norm uses the operator norm against delta1 delta2") {
    CoefficientSet cs = CoefficientSet::zeros(2, 2, TimeGrid(0.0, 1.0, 4));
    cs.Q = CoefficientSchedule::constant(Eigen::MatrixXd::Identity(2, 2));
    cs.R = CoefficientSchedule::constant(Eigen::MatrixXd::Identity(2, 2));
    cs.S = CoefficientSchedule::constant(0.5 * Eigen::MatrixXd::Identity(2, 2));
    AssumptionReport rep = validate_assumptions(cs);
    CHECK(rep.passed());
    CHECK(rep.s_norm_sq == doctest::Approx(0.25));
    cs.S = CoefficientSchedule::constant(1.5 * Eigen::MatrixXd::Identity(2, 2));
    rep = validate_assumptions(cs);
    CHECK_FALSE(rep.passed());
}

TEST_CASE("scaling R never decreases the control margin") {
    // Monotonicity over a small family of models and scales.
    for (double base : {0.5, 1.0, 2.0}) {
        CoefficientSet cs = CoefficientSet::zeros(2, 2, TimeGrid(0.0, 1.0, 6));
        Eigen::MatrixXd R(2, 2);
        R << base, 0.1, 0.1, base + 0.5;
        cs.Q = CoefficientSchedule::constant(Eigen::MatrixXd::Identity(2, 2));
        cs.R = CoefficientSchedule::constant(R);
        const double d2 = validate_assumptions(cs).delta2;
        for (double c : {1.5, 2.0, 10.0}) {
            CoefficientSet scaled = cs;
            scaled.R = CoefficientSchedule::constant(c * R);
            CHECK(validate_assumptions(scaled).delta2 >= d2 - 1e-14);
        }
    }
}

TEST_CASE("game reduces to the control problem only without barred couplings") {
    const CoefficientSet ex = to_coefficients(testing::default_exhaustible(), 50);
    CHECK(is_mfg_reducible(ex).reducible);

    CoefficientSet cs = CoefficientSet::zeros(1, 1, TimeGrid(0.0, 1.0, 4));
    cs.Abar = CoefficientSchedule::constant(m1(1.0));
    ReducibilityReport rep = is_mfg_reducible(cs);
    CHECK_FALSE(rep.reducible);
    CHECK(rep.violations == std::vector<std::string>{"Abar"});

    CoefficientSet cs2 = CoefficientSet::zeros(1, 1, TimeGrid(0.0, 1.0, 4));
    cs2.S2bar = CoefficientSchedule::constant(m1(1.0));
    rep = is_mfg_reducible(cs2);
    CHECK_FALSE(rep.reducible);
    bool found = false;
    for (const auto& v : rep.violations)
        if (v == "S1bar != S2bar") found = true;
    CHECK(found);
}

TEST_CASE("sampling: constant, discounted, tabulated") {
    TimeGrid g(0.0, 2.0, 2);
    CoefficientSchedule c = CoefficientSchedule::constant(m1(3.0));
    CHECK(c.at(0.7, g)(0, 0) == 3.0);

    CoefficientSchedule e = CoefficientSchedule::exp_discount(m1(1.0), 0.1);
    CHECK(e.at(1.0, g)(0, 0) == doctest::Approx(std::exp(-0.1)).epsilon(1e-15));

    // Linear interpolation midway between table nodes; exact at the nodes.
    CoefficientSchedule t = CoefficientSchedule::tabulated({m1(0.0), m1(1.0), m1(4.0)});
    CHECK(t.at(0.5, g)(0, 0) == doctest::Approx(0.5));
    CHECK(t.at_node(1, g)(0, 0) == 1.0);
    CHECK(t.at(1.0, g)(0, 0) == 1.0);
    CHECK(t.at(1.5, g)(0, 0) == doctest::Approx(2.5));

    CHECK_THROWS_AS(c.at(-0.1, g), RangeError);
    CHECK_THROWS_AS(c.at(2.1, g), RangeError);
}

TEST_CASE("tabulated rules must match the grid") {
    CoefficientSet cs = CoefficientSet::zeros(1, 1, TimeGrid(0.0, 1.0, 4));
    cs.Q = CoefficientSchedule::tabulated({m1(1.0), m1(1.0)});  // needs 5 entries
    CHECK_THROWS_AS(cs.check_shapes(), StructuralError);
}

TEST_CASE("matrix demo satisfies the standing assumptions") {
    const AssumptionReport rep = validate_assumptions(testing::matrix_demo(20));
    CHECK(rep.passed());
    CHECK(rep.delta1 == doctest::Approx(1.0));
    CHECK(rep.delta2 == doctest::Approx(1.0));
}

TEST_CASE("normal inverse cdf round-trips the cdf") {
    for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-9}) {
        const double x = rng::inverse_normal_cdf(p);
        CHECK(rng::normal_cdf(x) == doctest::Approx(p).epsilon(1e-10));
    }
}

}  // TEST_SUITE
