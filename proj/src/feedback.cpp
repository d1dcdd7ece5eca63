#include "mflq/feedback.hpp"

namespace mflq {

Eigen::VectorXd optimal_control_node(const GainSchedule& gs, int k, const Eigen::VectorXd& X,
                                     const Eigen::VectorXd& Xbar) {
    return -gs.K0[k] * (X - Xbar) - gs.K1[k] * Xbar - gs.c[k];
}

Eigen::VectorXd optimal_control(const GainSchedule& gs, const Eigen::VectorXd& X,
                                const Eigen::VectorXd& Xbar, double s) {
    return -gs.K0_at(s) * (X - Xbar) - gs.K1_at(s) * Xbar - gs.c_at(s);
}

Eigen::VectorXd mean_control_node(const GainSchedule& gs, int k, const Eigen::VectorXd& Xbar) {
    return -gs.K1[k] * Xbar - gs.c[k];
}

namespace {

AdjointState reconstruct(const CoefficientValues& v, const Eigen::MatrixXd& P,
                         const Eigen::MatrixXd& Pi, const Eigen::VectorXd& phi,
                         const Eigen::VectorXd& dv, const Eigen::VectorXd& vbar,
                         const Eigen::VectorXd& dX, const Eigen::VectorXd& Xbar) {
    AdjointState a;
    a.Y = P * dX + Pi * Xbar + phi;
    a.Z = P * (v.C * dX + (v.C + v.Cbar) * Xbar + v.D * dv + (v.D + v.Dbar) * vbar);
    a.Z0 = P * (v.F * dX + v.G * dv) + Pi * ((v.F + v.Fbar) * Xbar + (v.G + v.Gbar) * vbar);
    return a;
}

}  // namespace

AdjointState reconstruct_adjoint_node(const RiccatiSolution& rs, const GainSchedule& gs,
                                      const CoefficientSet& cs, int k, const Eigen::VectorXd& X,
                                      const Eigen::VectorXd& Xbar) {
    const CoefficientValues v = cs.at_node(k);
    const Eigen::VectorXd dX = X - Xbar;
    const Eigen::VectorXd dv = -gs.K0[k] * dX;
    const Eigen::VectorXd& offset =
        rs.convention == PhiConvention::TerminalZero ? gs.c[k] : gs.c_truncated[k];
    const Eigen::VectorXd vbar = -gs.K1[k] * Xbar - offset;
    return reconstruct(v, rs.P[k], rs.Pi[k], rs.phi(k), dv, vbar, dX, Xbar);
}

AdjointState reconstruct_adjoint(const RiccatiSolution& rs, const GainSchedule& gs,
                                 const CoefficientSet& cs, const Eigen::VectorXd& X,
                                 const Eigen::VectorXd& Xbar, double s) {
    const CoefficientValues v = cs.at(s);
    const Eigen::MatrixXd P = rs.P_at(s);
    const Eigen::MatrixXd Pi = rs.Pi_at(s);
    const Eigen::VectorXd phi = rs.phi_at(s);
    const Eigen::VectorXd dX = X - Xbar;
    const Eigen::VectorXd dv = -gs.K0_at(s) * dX;
    Eigen::VectorXd offset;
    if (rs.convention == PhiConvention::TerminalZero) {
        offset = gs.c_at(s);
    } else {
        const double u = (s - gs.grid.t0) / gs.grid.dt();
        int k = std::clamp(static_cast<int>(std::floor(u)), 0, gs.grid.n_steps - 1);
        const double w = std::clamp(u - k, 0.0, 1.0);
        offset = (1.0 - w) * gs.c_truncated[k] + w * gs.c_truncated[k + 1];
    }
    const Eigen::VectorXd vbar = -gs.K1_at(s) * Xbar - offset;
    return reconstruct(v, P, Pi, phi, dv, vbar, dX, Xbar);
}

}  // namespace mflq
