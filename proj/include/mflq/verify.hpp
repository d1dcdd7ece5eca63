#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "mflq/simulate.hpp"

namespace mflq {

/// Residual summary over particles and nodes.
struct ResidualReport {
    double rms = 0.0;
    double max_abs = 0.0;
    std::vector<double> profile;       // per-node RMS
    int n_steps = 0;
    double terminal_mismatch = 0.0;    // backward-equation checks only
};

/// Evaluates the stationarity (coupling) relation
///   B^T Y + Bbar^T Ybar + D^T Z + Dbar^T Zbar + G^T Z0 + Gbar^T Z0bar
///   + R v + Rbar vbar + S X + Sbar Xbar + r + rbar
/// at every particle and node, with (Y, Z, Z0) reconstructed from the Riccati
/// data and conditional means taken from the batch fields. Given a batch
/// simulated with the optimal policy this is an algebraic identity under the
/// terminal-zero offset, so the RMS sits at rounding level independent of dt;
/// the forward-integral offset leaves a nonzero residual whenever the two
/// offsets differ. Profile has one entry per node.
ResidualReport coupling_residual(const EnsembleBatch& batch, const RiccatiSolution& rs,
                                 const GainSchedule& gs, const CoefficientSet& cs);

/// Backward-equation residual. Per particle and step,
///   rho_k = Y_{k+1} - Y_k + drift_k dt - Z_k dW_k - Z0_k dW0_k,
/// where drift_k is the backward drift evaluated along the reconstructed
/// adjoints. Reported is the backward-accumulated residual e_k = sum_{j>=k}
/// rho_j, i.e. the gap between the reconstructed adjoint and the discretely
/// integrated backward equation started from the true terminal value; its RMS
/// shrinks at first order in dt. Profile has one entry per step. The terminal
/// mismatch is max over particles of |Y(T) - H X(T) - Hbar Xbar(T)|.
ResidualReport bsde_residual(const EnsembleBatch& batch, const NoiseBundle& noise,
                             const RiccatiSolution& rs, const GainSchedule& gs,
                             const CoefficientSet& cs);

/// Least-squares slope of log(rms) against log(dt); inputs must be positive.
double convergence_slope(const std::vector<double>& dts, const std::vector<double>& rms);

/// One directional derivative probe of the cost at the simulated policy.
struct GateauxRow {
    std::string direction;
    double slope = 0.0;      // central difference at the smallest h
    double slope_se = 0.0;   // standard error across common paths
    double curvature = 0.0;  // second-derivative estimate from the pure-quadratic fit
    double r2 = 1.0;         // fit quality of dJ ~ a h^2 over the positive h values
    std::vector<double> h;
    std::vector<double> dJ;     // mean of J(h) - J(0) at each h
    std::vector<double> dJ_se;  // its standard error
};

/// Perturbs the base policy (the optimal one unless `base` is given) along
/// each direction with common random numbers: J at +/- h_min gives the slope,
/// J at each positive h gives the quadratic fit.
std::vector<GateauxRow> gateaux_test(const CoefficientSet& cs, const GainSchedule& gs,
                                     const RiccatiSolution& rs,
                                     const std::vector<std::pair<std::string, Policy>>& directions,
                                     const std::vector<double>& h_values, const NoiseBundle& noise,
                                     MeanMode mode, const Policy* base = nullptr);

/// Independent discrete-time dynamic-programming recursion for the classical
/// LQ sub-case (all barred coefficients and S zero): value matrices P_k from
/// the Bellman recursion of the Euler-discretized problem, first-order
/// consistent with the continuous backward flow. Used only as a cross-check.
std::vector<Eigen::MatrixXd> dp_oracle(const CoefficientSet& cs, const TimeGrid& grid);

}  // namespace mflq
