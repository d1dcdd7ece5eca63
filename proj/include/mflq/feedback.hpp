#pragma once

#include <Eigen/Dense>

#include "mflq/riccati.hpp"

namespace mflq {

/// Adjoint triple at one instant for one particle.
struct AdjointState {
    Eigen::VectorXd Y, Z, Z0;
};

/// Optimal feedback law v = -K0 (X - Xbar) - K1 Xbar - c at grid node k.
Eigen::VectorXd optimal_control_node(const GainSchedule& gs, int k, const Eigen::VectorXd& X,
                                     const Eigen::VectorXd& Xbar);

/// Same law with gains linearly interpolated at an off-grid time (diagnostics;
/// simulation is grid-aligned).
Eigen::VectorXd optimal_control(const GainSchedule& gs, const Eigen::VectorXd& X,
                                const Eigen::VectorXd& Xbar, double s);

/// Conditional-mean part of the optimal control, vbar = -K1 Xbar - c.
Eigen::VectorXd mean_control_node(const GainSchedule& gs, int k, const Eigen::VectorXd& Xbar);

/// Reconstructs (Y, Z, Z0) from the Riccati data at node k:
///   Y  = P (X - Xbar) + Pi Xbar + phi
///   Z  = P [ C (X-Xbar) + (C+Cbar) Xbar + D (v-vbar) + (D+Dbar) vbar ]
///   Z0 = P [ F (X-Xbar) + G (v-vbar) ] + Pi [ (F+Fbar) Xbar + (G+Gbar) vbar ]
/// with v - vbar = -K0 (X - Xbar). The affine part of vbar follows the active
/// offset convention: -K1 Xbar - c under terminal-zero, and the offset-free
/// -K1 Xbar - Sigma1^{-1}(r + rbar) under the forward-integral convention.
AdjointState reconstruct_adjoint_node(const RiccatiSolution& rs, const GainSchedule& gs,
                                      const CoefficientSet& cs, int k, const Eigen::VectorXd& X,
                                      const Eigen::VectorXd& Xbar);

/// Off-grid variant; all inputs linearly interpolated.
AdjointState reconstruct_adjoint(const RiccatiSolution& rs, const GainSchedule& gs,
                                 const CoefficientSet& cs, const Eigen::VectorXd& X,
                                 const Eigen::VectorXd& Xbar, double s);

}  // namespace mflq
