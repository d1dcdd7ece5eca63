#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mflq/errors.hpp"
#include "mflq/exhaustible.hpp"
#include "mflq/riccati.hpp"

using namespace mflq;
using testing::m1;

namespace {

double max_rel_err_p(const ExhaustibleParams& params, int n_steps) {
    const CoefficientSet cs = to_coefficients(params, n_steps);
    const RiccatiSolution rs = solve_riccati(cs);
    double worst = 0.0;
    for (int k = 0; k <= n_steps; ++k) {
        const double exact = closed_form_p(params, cs.grid.node(k));
        worst = std::max(worst, std::abs(rs.P[k](0, 0) - exact) / std::abs(exact));
    }
    return worst;
}

}  // namespace

TEST_SUITE("riccati") {

TEST_CASE("pure state cost integrates linearly") {
    // With only Q = R = H = 1 and no dynamics the flow is P' = -Q.
    CoefficientSet cs = CoefficientSet::zeros(1, 1, TimeGrid(0.0, 1.0, 100));
    cs.Q = CoefficientSchedule::constant(m1(1.0));
    cs.R = CoefficientSchedule::constant(m1(1.0));
    cs.H = m1(1.0);
    const RiccatiSolution rs = solve_riccati(cs);
    for (int k = 0; k <= 100; ++k) {
        const double s = cs.grid.node(k);
        CHECK(rs.P[k](0, 0) == doctest::Approx(1.0 + (1.0 - s)).epsilon(1e-12));
        CHECK(rs.Pi[k](0, 0) == doctest::Approx(1.0 + (1.0 - s)).epsilon(1e-12));
        CHECK(rs.phi_backward[k].cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("terminal values are exact") {
    const CoefficientSet cs = testing::matrix_demo(50);
    const RiccatiSolution rs = solve_riccati(cs);
    CHECK((rs.P.back() - cs.H).cwiseAbs().maxCoeff() == 0.0);
    CHECK((rs.Pi.back() - cs.H - cs.Hbar).cwiseAbs().maxCoeff() == 0.0);
    CHECK(rs.phi_backward.back().cwiseAbs().maxCoeff() == 0.0);
    CHECK(rs.phi_paper.front().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("undiscounted driftless scalar model has the hyperbolic closed form") {
    const ExhaustibleParams p = ExhaustibleParams::with_epsilon(0.0, 0.0, 0.0, 2.0, 0.0, 1.0, 1.0);
    const CoefficientSet cs = to_coefficients(p, 200);
    const RiccatiSolution rs = solve_riccati(cs);
    for (int k = 0; k <= 200; ++k) {
        const double s = cs.grid.node(k);
        CHECK(rs.P[k](0, 0) == doctest::Approx(1.0 / (1.0 + 1.0 - s)).epsilon(1e-9));
    }
}

TEST_CASE("numeric flow matches the scalar closed form on both branches") {
    // lambda != 0 branch
    CHECK(max_rel_err_p(ExhaustibleParams::with_epsilon(0.1, 0.3, 0.2, 2.0, 0.0, 1.0, 1.0), 2000) <
          1e-6);
    // lambda = 0 forced: mu = nu^2 + nu0^2
    CHECK(max_rel_err_p(ExhaustibleParams::with_epsilon(0.13, 0.3, 0.2, 2.0, 0.0, 1.0, 1.0), 2000) <
          1e-6);
}

TEST_CASE("fourth-order convergence on a smooth matrix model") {
    const CoefficientSet base = testing::matrix_demo(10);
    auto solve_at = [&](int n) {
        CoefficientSet cs = base;
        cs.grid = TimeGrid(0.0, 1.0, n);
        return solve_riccati(cs);
    };
    const RiccatiSolution a = solve_at(25), b = solve_at(50), c = solve_at(100);
    const double e1 = (a.P.front() - b.P.front()).cwiseAbs().maxCoeff();
    const double e2 = (b.P.front() - c.P.front()).cwiseAbs().maxCoeff();
    const double order = std::log2(e1 / e2);
    CHECK(order >= 3.5);
}

TEST_CASE("flows stay symmetric and positive semidefinite") {
    const CoefficientSet cs = testing::matrix_demo(120);
    const RiccatiSolution rs = solve_riccati(cs);
    for (int k = 0; k <= 120; ++k) {
        CHECK((rs.P[k] - rs.P[k].transpose()).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((rs.Pi[k] - rs.Pi[k].transpose()).cwiseAbs().maxCoeff() <= 1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ep(rs.P[k], Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> epi(rs.Pi[k], Eigen::EigenvaluesOnly);
        CHECK(ep.eigenvalues().minCoeff() >= -1e-10);
        CHECK(epi.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("without aggregate terms the two flows coincide") {
    CoefficientSet cs = testing::matrix_demo(80);
    const Eigen::MatrixXd z2 = Eigen::MatrixXd::Zero(2, 2);
    cs.Abar = cs.Cbar = cs.Fbar = CoefficientSchedule::constant(z2);
    cs.Bbar = cs.Dbar = cs.Gbar = CoefficientSchedule::constant(z2);
    cs.Qbar = cs.Rbar = CoefficientSchedule::constant(z2);
    cs.Sbar = cs.S1bar = cs.S2bar = CoefficientSchedule::constant(z2);
    cs.qbar = cs.rbar = CoefficientSchedule::zero(2, 1);
    cs.Hbar = z2;
    const RiccatiSolution rs = solve_riccati(cs);
    for (int k = 0; k <= 80; ++k)
        CHECK((rs.P[k] - rs.Pi[k]).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("backward offset satisfies its stated flow at interior nodes") {
    // Central difference of the stored offset against the right-hand side
    //   phi' = -(A+Abar)^T phi + Lambda1^T Sigma1^{-1}((B+Bbar)^T phi + r + rbar) - (q + qbar).
    const CoefficientSet cs = testing::matrix_demo(400);
    const RiccatiSolution rs = solve_riccati(cs);
    const GainSchedule gs = compute_gains(cs, rs);
    const double dt = cs.grid.dt();
    for (int k = 100; k <= 300; k += 50) {
        const Eigen::VectorXd fd = (rs.phi_backward[k + 1] - rs.phi_backward[k - 1]) / (2.0 * dt);
        const CoefficientValues v = cs.at_node(k);
        const Eigen::MatrixXd As = v.A + v.Abar;
        const Eigen::MatrixXd Bs = v.B + v.Bbar;
        const Eigen::VectorXd rhs =
            -As.transpose() * rs.phi_backward[k] +
            gs.Lambda1[k].transpose() *
                gs.Sigma1[k].ldlt().solve(Bs.transpose() * rs.phi_backward[k] + v.r + v.rbar) -
            (v.q + v.qbar);
        CHECK((fd - rhs).cwiseAbs().maxCoeff() <= 5e-5);
    }
}

TEST_CASE("offsets vanish for homogeneous costs under both conventions") {
    CoefficientSet cs = testing::matrix_demo(50);
    cs.q = cs.qbar = CoefficientSchedule::zero(2, 1);
    cs.r = cs.rbar = CoefficientSchedule::zero(2, 1);
    const RiccatiSolution rs = solve_riccati(cs, PhiConvention::PaperForwardIntegral);
    for (int k = 0; k <= 50; ++k) {
        CHECK(rs.phi_backward[k].cwiseAbs().maxCoeff() <= 1e-14);
        CHECK(rs.phi_paper[k].cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("assumption failure is a precondition error") {
    CoefficientSet cs = CoefficientSet::zeros(1, 1, TimeGrid(0.0, 1.0, 10));
    cs.R = CoefficientSchedule::constant(m1(-1.0));
    CHECK_THROWS_AS(solve_riccati(cs), AssumptionError);
}

TEST_CASE("ill-conditioned control weight trips the singularity guard") {
    CoefficientSet cs = CoefficientSet::zeros(2, 2, TimeGrid(0.0, 1.0, 10));
    Eigen::MatrixXd R(2, 2);
    R << 1.0, 0.0, 0.0, 1e-13;
    cs.Q = CoefficientSchedule::constant(Eigen::MatrixXd::Identity(2, 2));
    cs.R = CoefficientSchedule::constant(R);
    CHECK_THROWS_AS(solve_riccati(cs), SingularityError);
}

TEST_CASE("gain formulas collapse as expected") {
    SUBCASE("no diffusion control: Lambda0 = B^T P, Sigma0 = R") {
        CoefficientSet cs = CoefficientSet::zeros(2, 2, TimeGrid(0.0, 1.0, 10));
        cs.Q = CoefficientSchedule::constant(Eigen::MatrixXd::Identity(2, 2));
        cs.R = CoefficientSchedule::constant(2.0 * Eigen::MatrixXd::Identity(2, 2));
        Eigen::MatrixXd B(2, 2);
        B << 1.0, 0.5, 0.0, 1.0;
        cs.B = CoefficientSchedule::constant(B);
        cs.H = Eigen::MatrixXd::Identity(2, 2);
        const RiccatiSolution rs = solve_riccati(cs);
        const GainSchedule gs = compute_gains(cs, rs);
        for (int k : {0, 5, 10}) {
            CHECK((gs.Lambda0[k] - B.transpose() * rs.P[k]).cwiseAbs().maxCoeff() <= 1e-14);
            CHECK((gs.Sigma0[k] - cs.R.at_node(k, cs.grid)).cwiseAbs().maxCoeff() <= 1e-14);
        }
    }
    SUBCASE("identity data: Lambda1 = Sigma1 = 2I, K1 = I") {
        // Direct arithmetic with P = Pi = H = I, B = Bbar = I, R = Rbar = I.
        CoefficientSet cs = CoefficientSet::zeros(2, 2, TimeGrid(0.0, 1.0, 2));
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
        cs.Q = CoefficientSchedule::constant(I);
        cs.R = CoefficientSchedule::constant(I);
        cs.Rbar = CoefficientSchedule::constant(I);
        cs.B = CoefficientSchedule::constant(I);
        cs.Bbar = CoefficientSchedule::constant(I);
        cs.H = I;
        cs.Hbar = Eigen::MatrixXd::Zero(2, 2);
        RiccatiSolution rs;
        rs.grid = cs.grid;
        rs.P.assign(3, I);
        rs.Pi.assign(3, I);
        rs.phi_backward.assign(3, Eigen::VectorXd::Zero(2));
        rs.phi_paper.assign(3, Eigen::VectorXd::Zero(2));
        const GainSchedule gs = compute_gains(cs, rs);
        CHECK((gs.Lambda1[1] - 2.0 * I).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK((gs.Sigma1[1] - 2.0 * I).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK((gs.K1[1] - I).cwiseAbs().maxCoeff() <= 1e-14);
    }
    SUBCASE("scalar production model: Sigma1 = (1+beta) e^{-mu s}, Lambda1 = -Pi") {
        const ExhaustibleParams p = testing::default_exhaustible();
        const CoefficientSet cs = to_coefficients(p, 100);
        const RiccatiSolution rs = solve_riccati(cs);
        const GainSchedule gs = compute_gains(cs, rs);
        for (int k : {0, 25, 50, 100}) {
            const double s = cs.grid.node(k);
            CHECK(gs.Sigma1[k](0, 0) ==
                  doctest::Approx((1.0 + p.beta()) * std::exp(-p.mu * s)).epsilon(1e-12));
            CHECK(gs.Lambda1[k](0, 0) == doctest::Approx(-rs.Pi[k](0, 0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("gain condition numbers and coercivity floor are tracked") {
    const CoefficientSet cs = testing::matrix_demo(40);
    const RiccatiSolution rs = solve_riccati(cs);
    const GainSchedule gs = compute_gains(cs, rs);
    CHECK(gs.delta2 == doctest::Approx(1.0));
    for (int k = 0; k <= 40; ++k) {
        CHECK(gs.cond0[k] < 1e3);
        CHECK(gs.cond1[k] < 1e3);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e0(gs.Sigma0[k], Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e1(gs.Sigma1[k], Eigen::EigenvaluesOnly);
        CHECK(e0.eigenvalues().minCoeff() >= gs.delta2 * (1.0 - 1e-8));
        CHECK(e1.eigenvalues().minCoeff() >= gs.delta2 * (1.0 - 1e-8));
    }
}

}  // TEST_SUITE
