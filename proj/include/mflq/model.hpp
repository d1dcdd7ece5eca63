#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mflq/grid.hpp"
#include "mflq/schedule.hpp"

namespace mflq {

/// Every coefficient evaluated at one instant.
struct CoefficientValues {
    Eigen::MatrixXd A, Abar, C, Cbar, F, Fbar;      // d x d
    Eigen::MatrixXd B, Bbar, D, Dbar, G, Gbar;      // d x m
    Eigen::MatrixXd Q, Qbar;                        // d x d, symmetric
    Eigen::MatrixXd R, Rbar;                        // m x m, symmetric
    Eigen::MatrixXd S, Sbar, S1bar, S2bar;          // m x d
    Eigen::VectorXd q, qbar;                        // d
    Eigen::VectorXd r, rbar;                        // m
};

/// Full linear-quadratic coefficient data for the control problem and the game.
///
/// State dynamics use (A, Abar, B, Bbar | C, Cbar, D, Dbar | F, Fbar, G, Gbar)
/// for the drift, idiosyncratic diffusion and common diffusion respectively;
/// barred entries multiply conditional means. The cost uses (Q, Qbar, R, Rbar,
/// S, Sbar, q, qbar, r, rbar) for the running part and the constant (H, Hbar)
/// pair for the terminal part. S1bar, S2bar are the game-variant cross terms.
struct CoefficientSet {
    int d = 1;  // state dimension
    int m = 1;  // control dimension
    TimeGrid grid;

    CoefficientSchedule A, Abar, C, Cbar, F, Fbar;
    CoefficientSchedule B, Bbar, D, Dbar, G, Gbar;
    CoefficientSchedule Q, Qbar, R, Rbar;
    CoefficientSchedule S, Sbar, S1bar, S2bar;
    CoefficientSchedule q, qbar, r, rbar;
    Eigen::MatrixXd H, Hbar;

    /// All-zero model on the given grid; callers then set the nonzero pieces.
    static CoefficientSet zeros(int d, int m, const TimeGrid& grid);

    /// Shape consistency; throws StructuralError on any mismatch.
    void check_shapes() const;

    /// Coefficients at an arbitrary time in [t0, T].
    CoefficientValues at(double s) const;

    /// Coefficients at grid node k (exact for tabulated rules).
    CoefficientValues at_node(int k) const;
};

struct AssumptionViolation {
    std::string check;
    int node = 0;
    double margin = 0.0;  // amount by which the check fails
};

/// Result of checking the standing coercivity/symmetry assumptions.
struct AssumptionReport {
    double delta1 = 0.0;    // min eigenvalue of Q and Q+Qbar over the grid
    double delta2 = 0.0;    // min eigenvalue of R and R+Rbar over the grid
    bool h_ok = false;      // H >= 0 and H + Hbar >= 0
    bool q_ok = false;      // delta1 >= 0
    bool r_ok = false;      // delta2 > 0
    bool s_ok = false;      // ||S||^2, ||S+Sbar||^2 < delta1 delta2, or S = Sbar = 0
    double s_norm_sq = 0.0; // max over grid of squared operator norms of S, S+Sbar
    std::vector<AssumptionViolation> violations;

    bool passed() const { return h_ok && q_ok && r_ok && s_ok && delta2 > 0.0; }
};

/// Evaluates the coercivity assumptions at every grid node via smallest
/// eigenvalues. Non-symmetric Q/R/H beyond 1e-12 is a structural error,
/// reported by exception rather than as an assumption failure.
AssumptionReport validate_assumptions(const CoefficientSet& cs);

struct ReducibilityReport {
    bool reducible = false;
    std::vector<std::string> violations;
};

/// A game with these coefficients is solved by the associated control problem
/// iff every barred dynamics/affine coefficient vanishes and Sbar = S1bar = S2bar.
ReducibilityReport is_mfg_reducible(const CoefficientSet& cs);

}  // namespace mflq
