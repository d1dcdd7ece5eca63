#pragma once

#include <Eigen/Dense>

#include "mflq/exhaustible.hpp"
#include "mflq/model.hpp"

namespace mflq::testing {

inline Eigen::MatrixXd m1(double v) { return (Eigen::MatrixXd(1, 1) << v).finished(); }

inline ExhaustibleParams default_exhaustible(double eps = 2.0) {
    return ExhaustibleParams::with_epsilon(0.1, 0.3, 0.2, eps, 0.0, 1.0, 1.0);
}

/// Dense two-dimensional model exercising every coefficient block; satisfies
/// the coercivity assumptions with delta1 = delta2 = 1.
inline CoefficientSet matrix_demo(int n_steps = 100) {
    CoefficientSet cs = CoefficientSet::zeros(2, 2, TimeGrid(0.0, 1.0, n_steps));
    Eigen::MatrixXd A(2, 2), B(2, 2), S(2, 2);
    A << 0.0, 1.0, -1.0, -0.5;
    B << 1.0, 0.0, 0.2, 1.0;
    S << 0.1, 0.0, 0.0, 0.1;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd Sw(2, 2), J(2, 2);
    Sw << 0.0, 0.05, 0.05, 0.0;
    J << 0.0, 1.0, 1.0, 0.0;

    cs.A = CoefficientSchedule::constant(A);
    cs.Abar = CoefficientSchedule::constant(0.1 * I);
    cs.B = CoefficientSchedule::constant(B);
    cs.Bbar = CoefficientSchedule::constant(0.2 * J);
    cs.C = CoefficientSchedule::constant(0.15 * I);
    cs.Cbar = CoefficientSchedule::constant(0.05 * I);
    cs.D = CoefficientSchedule::constant(0.1 * I);
    cs.Dbar = CoefficientSchedule::constant(0.05 * I);
    cs.F = CoefficientSchedule::constant((Eigen::MatrixXd(2, 2) << 0.0, 0.1, 0.0, 0.0).finished());
    cs.Fbar = CoefficientSchedule::constant(0.02 * I);
    cs.G = CoefficientSchedule::constant(0.05 * I);
    cs.Gbar = CoefficientSchedule::constant(0.01 * I);
    cs.Q = CoefficientSchedule::constant(I);
    cs.Qbar = CoefficientSchedule::constant(0.5 * I);
    cs.R = CoefficientSchedule::constant(I);
    cs.Rbar = CoefficientSchedule::constant(0.25 * I);
    cs.S = CoefficientSchedule::constant(S);
    cs.Sbar = CoefficientSchedule::constant(Sw);
    cs.S1bar = CoefficientSchedule::constant(Sw);
    cs.S2bar = CoefficientSchedule::constant(Sw);
    cs.q = CoefficientSchedule::constant((Eigen::MatrixXd(2, 1) << 0.1, -0.1).finished());
    cs.qbar = CoefficientSchedule::constant((Eigen::MatrixXd(2, 1) << 0.05, 0.0).finished());
    cs.r = CoefficientSchedule::constant((Eigen::MatrixXd(2, 1) << 0.05, 0.0).finished());
    cs.rbar = CoefficientSchedule::constant((Eigen::MatrixXd(2, 1) << 0.02, 0.0).finished());
    cs.H = I;
    cs.Hbar = 0.5 * I;
    return cs;
}

}  // namespace mflq::testing
