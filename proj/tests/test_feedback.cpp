#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mflq/exhaustible.hpp"
#include "mflq/feedback.hpp"
#include "mflq/rng.hpp"

using namespace mflq;
using testing::m1;

namespace {

struct Solved {
    CoefficientSet cs;
    RiccatiSolution rs;
    GainSchedule gs;
};

Solved solve(const CoefficientSet& cs, PhiConvention conv = PhiConvention::TerminalZero) {
    Solved s{cs, solve_riccati(cs, conv), {}};
    s.gs = compute_gains(s.cs, s.rs);
    return s;
}

// Left side of the stationarity relation for one particle, all conditional
// means taken at xbar.
Eigen::VectorXd coupling_lhs(const Solved& s, int k, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& xbar) {
    const CoefficientValues v = s.cs.at_node(k);
    const AdjointState a = reconstruct_adjoint_node(s.rs, s.gs, s.cs, k, x, xbar);
    const AdjointState bar = reconstruct_adjoint_node(s.rs, s.gs, s.cs, k, xbar, xbar);
    const Eigen::VectorXd u = optimal_control_node(s.gs, k, x, xbar);
    const Eigen::VectorXd ubar = mean_control_node(s.gs, k, xbar);
    return v.B.transpose() * a.Y + v.Bbar.transpose() * bar.Y + v.D.transpose() * a.Z +
           v.Dbar.transpose() * bar.Z + v.G.transpose() * a.Z0 + v.Gbar.transpose() * bar.Z0 +
           v.R * u + v.Rbar * ubar + v.S * x + v.Sbar * xbar + v.r + v.rbar;
}

}  // namespace

TEST_SUITE("feedback") {

TEST_CASE("law vanishes at the origin without affine terms") {
    CoefficientSet cs = testing::matrix_demo(20);
    cs.q = cs.qbar = CoefficientSchedule::zero(2, 1);
    cs.r = cs.rbar = CoefficientSchedule::zero(2, 1);
    const Solved s = solve(cs);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
    CHECK(optimal_control_node(s.gs, 7, zero, zero).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("aligned state drops the centered gain") {
    const Solved s = solve(testing::matrix_demo(20));
    Eigen::VectorXd x(2);
    x << 0.7, -0.3;
    const Eigen::VectorXd v = optimal_control_node(s.gs, 5, x, x);
    const Eigen::VectorXd expect = -s.gs.K1[5] * x - s.gs.c[5];
    CHECK((v - expect).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("scalar production law in terms of the Riccati values") {
    const ExhaustibleParams p = testing::default_exhaustible();
    const Solved s = solve(to_coefficients(p, 100));
    const double beta = p.beta(), alpha = p.alpha();
    for (int k : {0, 30, 77}) {
        const double sN = s.cs.grid.node(k);
        const double pk = s.rs.P[k](0, 0), pik = s.rs.Pi[k](0, 0);
        const double phik = s.rs.phi_backward[k](0);
        const double X = 1.3, Xb = 0.8;
        const double expect = std::exp(p.mu * sN) * (pk * (X - Xb) + (pik * Xb + phik) / (1.0 + beta)) +
                              alpha / (1.0 + beta);
        const double got = optimal_control_node(s.gs, k, m1(X).col(0), m1(Xb).col(0))(0);
        CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("terminal adjoint equals the terminal cost gradient") {
    const Solved s = solve(testing::matrix_demo(30));
    Eigen::VectorXd x(2), xb(2);
    x << 1.0, -2.0;
    xb << 0.5, 0.25;
    const AdjointState a = reconstruct_adjoint_node(s.rs, s.gs, s.cs, 30, x, xb);
    const Eigen::VectorXd expect = s.cs.H * x + s.cs.Hbar * xb;
    CHECK((a.Y - expect).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("common-noise adjoint vanishes without common diffusion") {
    CoefficientSet cs = testing::matrix_demo(20);
    const Eigen::MatrixXd z2 = Eigen::MatrixXd::Zero(2, 2);
    cs.F = cs.Fbar = CoefficientSchedule::constant(z2);
    cs.G = cs.Gbar = CoefficientSchedule::constant(z2);
    const Solved s = solve(cs);
    Eigen::VectorXd x(2);
    x << 0.4, 0.9;
    const AdjointState a = reconstruct_adjoint_node(s.rs, s.gs, s.cs, 10, x, x);
    CHECK(a.Z0.cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("scalar production adjoints") {
    const ExhaustibleParams p = testing::default_exhaustible();
    const Solved s = solve(to_coefficients(p, 100));
    const double X = 1.7, Xb = 1.1;
    for (int k : {0, 50, 100}) {
        const AdjointState a =
            reconstruct_adjoint_node(s.rs, s.gs, s.cs, k, m1(X).col(0), m1(Xb).col(0));
        const double pk = s.rs.P[k](0, 0), pik = s.rs.Pi[k](0, 0);
        CHECK(a.Z(0) == doctest::Approx(p.nu * pk * X).epsilon(1e-12));
        CHECK(a.Z0(0) == doctest::Approx(p.nu0 * (pk * (X - Xb) + pik * Xb)).epsilon(1e-12));
    }
}

TEST_CASE("particle average of the law is the mean law") {
    const Solved s = solve(testing::matrix_demo(20));
    std::vector<Eigen::VectorXd> xs;
    Eigen::VectorXd xbar = Eigen::VectorXd::Zero(2);
    for (int i = 0; i < 16; ++i) {
        Eigen::VectorXd x(2);
        x << rng::normal(7, 0, 0, i, 0), rng::normal(7, 0, 0, i, 1);
        xs.push_back(x);
        xbar += x;
    }
    xbar /= 16.0;
    Eigen::VectorXd avg = Eigen::VectorXd::Zero(2);
    for (const auto& x : xs) avg += optimal_control_node(s.gs, 9, x, xbar);
    avg /= 16.0;
    CHECK((avg - mean_control_node(s.gs, 9, xbar)).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("stationarity relation is an identity along the reconstruction") {
    const Solved s = solve(testing::matrix_demo(60));
    for (int k : {0, 13, 37, 60}) {
        for (int trial = 0; trial < 4; ++trial) {
            Eigen::VectorXd x(2), xb(2);
            x << rng::normal(11, 0, k, trial, 0), rng::normal(11, 0, k, trial, 1);
            xb << rng::normal(11, 0, k, trial, 2), rng::normal(11, 0, k, trial, 3);
            CHECK(coupling_lhs(s, k, x, xb).cwiseAbs().maxCoeff() <= 1e-9);
        }
    }
}

TEST_CASE("cost scaling leaves the feedback unchanged") {
    const CoefficientSet base = testing::matrix_demo(40);
    CoefficientSet scaled = base;
    const double c = 3.7;
    auto scale = [&](CoefficientSchedule& s) {
        s = CoefficientSchedule::constant(c * s.at_node(0, base.grid));
    };
    scale(scaled.Q); scale(scaled.Qbar); scale(scaled.R); scale(scaled.Rbar);
    scale(scaled.S); scale(scaled.Sbar); scale(scaled.S1bar); scale(scaled.S2bar);
    scale(scaled.q); scale(scaled.qbar); scale(scaled.r); scale(scaled.rbar);
    scaled.H = c * base.H;
    scaled.Hbar = c * base.Hbar;
    const Solved a = solve(base), b = solve(scaled);
    for (int k : {0, 20, 40}) {
        CHECK((a.gs.K0[k] - b.gs.K0[k]).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((a.gs.K1[k] - b.gs.K1[k]).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((a.gs.c[k] - b.gs.c[k]).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("off-grid evaluation interpolates the gains") {
    const Solved s = solve(testing::matrix_demo(10));
    Eigen::VectorXd x(2), xb(2);
    x << 1.0, 0.0;
    xb << 0.5, 0.5;
    const double mid = 0.5 * (s.cs.grid.node(3) + s.cs.grid.node(4));
    const Eigen::VectorXd v = optimal_control(s.gs, x, xb, mid);
    const Eigen::VectorXd v3 = optimal_control_node(s.gs, 3, x, xb);
    const Eigen::VectorXd v4 = optimal_control_node(s.gs, 4, x, xb);
    CHECK((v - 0.5 * (v3 + v4)).cwiseAbs().maxCoeff() <= 1e-12);
}

}  // TEST_SUITE
