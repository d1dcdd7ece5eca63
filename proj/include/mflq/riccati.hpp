#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mflq/model.hpp"

namespace mflq {

/// Which offset vector the adjoint reconstruction uses.
///
/// TerminalZero integrates the offset ODE backward from phi(T) = 0, the value
/// forced by the terminal condition Y(T) = H X(T) + Hbar Xbar(T); this is the
/// convention every solver component is built on. PaperForwardIntegral is the
/// forward quadrature phi(s) = int_t0^s [Lambda1^T Sigma1^{-1}(r+rbar)+q+qbar],
/// kept selectable only so the verification layer can demonstrate its
/// residuals; it never drives the control.
enum class PhiConvention { TerminalZero, PaperForwardIntegral };

const char* to_string(PhiConvention c);

/// Backward solutions P, Pi of the coupled matrix Riccati pair and the offset
/// vector phi, sampled on the grid.
///
///   P'  = -(A^T P + P A + C^T P C + F^T P F + Q) + Lambda0^T Sigma0^{-1} Lambda0,  P(T)  = H
///   Pi' = -(As^T Pi + Pi As + Cs^T P Cs + Fs^T Pi Fs + Q + Qbar)
///         + Lambda1^T Sigma1^{-1} Lambda1,                                         Pi(T) = H + Hbar
///
/// with As = A + Abar etc. The backward offset solves the linear ODE
///
///   phi' = -(A+Abar)^T phi + Lambda1^T Sigma1^{-1} ((B+Bbar)^T phi + r + rbar)
///          - (q + qbar),                                                           phi(T) = 0.
struct RiccatiSolution {
    TimeGrid grid;
    PhiConvention convention = PhiConvention::TerminalZero;
    std::vector<Eigen::MatrixXd> P;             // symmetric d x d per node
    std::vector<Eigen::MatrixXd> Pi;            // symmetric d x d per node
    std::vector<Eigen::VectorXd> phi_backward;  // terminal-zero offset
    std::vector<Eigen::VectorXd> phi_paper;     // forward-integral offset

    /// Offset under the active convention.
    const Eigen::VectorXd& phi(int k) const {
        return convention == PhiConvention::TerminalZero ? phi_backward[k] : phi_paper[k];
    }

    Eigen::MatrixXd P_at(double s) const;
    Eigen::MatrixXd Pi_at(double s) const;
    Eigen::VectorXd phi_at(double s) const;
};

/// Feedback data per grid node, derived from a Riccati solution:
///   Lambda0 = B^T P + D^T P C + G^T P F + S
///   Lambda1 = (B+Bbar)^T Pi + (D+Dbar)^T P (C+Cbar) + (G+Gbar)^T Pi (F+Fbar) + S + Sbar
///   Sigma0  = D^T P D + R
///   Sigma1  = (D+Dbar)^T P (D+Dbar) + (G+Gbar)^T Pi (G+Gbar) + R + Rbar
/// with K0 = Sigma0^{-1} Lambda0, K1 = Sigma1^{-1} Lambda1 and the affine gain
/// c = Sigma1^{-1} (r + rbar + (B+Bbar)^T phi) built on the backward offset.
/// c_truncated = Sigma1^{-1} (r + rbar) is the offset-free constant used by the
/// forward-integral reconstruction.
struct GainSchedule {
    TimeGrid grid;
    PhiConvention convention = PhiConvention::TerminalZero;
    double delta2 = 0.0;  // coercivity floor the Sigmas were checked against
    std::vector<Eigen::MatrixXd> Lambda0, Lambda1;  // m x d
    std::vector<Eigen::MatrixXd> Sigma0, Sigma1;    // m x m, SPD
    std::vector<Eigen::MatrixXd> K0, K1;            // m x d
    std::vector<Eigen::VectorXd> c;                 // m
    std::vector<Eigen::VectorXd> c_truncated;       // m
    std::vector<double> cond0, cond1;               // condition numbers per node

    Eigen::MatrixXd K0_at(double s) const;
    Eigen::MatrixXd K1_at(double s) const;
    Eigen::VectorXd c_at(double s) const;
};

/// Integrates P, Pi and the backward offset with a classical fourth-order
/// one-step method, backward in time, symmetrizing P and Pi each step; the
/// forward-integral offset is then accumulated by trapezoid quadrature.
/// Requires validate_assumptions(cs) to pass.
RiccatiSolution solve_riccati(const CoefficientSet& cs,
                              PhiConvention convention = PhiConvention::TerminalZero);

/// Gain matrices per node; inverses go through SPD factorizations and a
/// condition-number guard (> 1e12 raises SingularityError naming the node).
GainSchedule compute_gains(const CoefficientSet& cs, const RiccatiSolution& rs);

}  // namespace mflq
