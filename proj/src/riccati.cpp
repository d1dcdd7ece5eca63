#include "mflq/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mflq/errors.hpp"

namespace mflq {

namespace {

constexpr double kCondLimit = 1e12;

struct SigmaInverse {
    Eigen::MatrixXd inv;
    double cond = 0.0;
    double min_eig = 0.0;
};

// Symmetric inverse through an eigendecomposition so the condition number
// comes out of the same factorization that is inverted.
SigmaInverse invert_sigma(const Eigen::MatrixXd& sigma, const char* name, int node) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sigma + sigma.transpose()));
    const Eigen::VectorXd ev = es.eigenvalues();
    SigmaInverse out;
    out.min_eig = ev.minCoeff();
    const double emax = ev.cwiseAbs().maxCoeff();
    const double emin = ev.cwiseAbs().minCoeff();
    out.cond = emin > 0.0 ? emax / emin : std::numeric_limits<double>::infinity();
    if (out.min_eig <= 0.0 || out.cond > kCondLimit)
        throw SingularityError(std::string(name) + " numerically singular near node " +
                                   std::to_string(node) + " (cond " + std::to_string(out.cond) + ")",
                               node);
    out.inv = es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    return out;
}

struct GainValues {
    Eigen::MatrixXd Lambda0, Lambda1, Sigma0, Sigma1;
};

GainValues gain_values(const CoefficientValues& v, const Eigen::MatrixXd& P,
                       const Eigen::MatrixXd& Pi) {
    GainValues g;
    const Eigen::MatrixXd Bs = v.B + v.Bbar;
    const Eigen::MatrixXd Cs = v.C + v.Cbar;
    const Eigen::MatrixXd Ds = v.D + v.Dbar;
    const Eigen::MatrixXd Fs = v.F + v.Fbar;
    const Eigen::MatrixXd Gs = v.G + v.Gbar;
    g.Lambda0 = v.B.transpose() * P + v.D.transpose() * P * v.C + v.G.transpose() * P * v.F + v.S;
    g.Lambda1 = Bs.transpose() * Pi + Ds.transpose() * P * Cs + Gs.transpose() * Pi * Fs + v.S +
                v.Sbar;
    g.Sigma0 = v.D.transpose() * P * v.D + v.R;
    g.Sigma1 = Ds.transpose() * P * Ds + Gs.transpose() * Pi * Gs + v.R + v.Rbar;
    return g;
}

struct Derivatives {
    Eigen::MatrixXd dP, dPi;
    Eigen::VectorXd dphi;
};

// Backward flow of (P, Pi, phi); Pi reads the current P stage and phi reads
// both, so one stacked evaluation honors the solve order.
Derivatives riccati_rhs(const CoefficientSet& cs, double s, const Eigen::MatrixXd& P,
                        const Eigen::MatrixXd& Pi, const Eigen::VectorXd& phi, int node_hint) {
    const CoefficientValues v = cs.at(s);
    const GainValues g = gain_values(v, P, Pi);
    const SigmaInverse s0 = invert_sigma(g.Sigma0, "Sigma0", node_hint);
    const SigmaInverse s1 = invert_sigma(g.Sigma1, "Sigma1", node_hint);

    const Eigen::MatrixXd As = v.A + v.Abar;
    const Eigen::MatrixXd Cs = v.C + v.Cbar;
    const Eigen::MatrixXd Fs = v.F + v.Fbar;
    const Eigen::MatrixXd Bs = v.B + v.Bbar;

    Derivatives d;
    d.dP = -(v.A.transpose() * P + P * v.A + v.C.transpose() * P * v.C +
             v.F.transpose() * P * v.F + v.Q) +
           g.Lambda0.transpose() * s0.inv * g.Lambda0;
    d.dPi = -(As.transpose() * Pi + Pi * As + Cs.transpose() * P * Cs +
              Fs.transpose() * Pi * Fs + v.Q + v.Qbar) +
            g.Lambda1.transpose() * s1.inv * g.Lambda1;
    d.dphi = -As.transpose() * phi +
             g.Lambda1.transpose() * (s1.inv * (Bs.transpose() * phi + v.r + v.rbar)) -
             (v.q + v.qbar);
    return d;
}

Eigen::MatrixXd lerp(const std::vector<Eigen::MatrixXd>& a, double s, const TimeGrid& g) {
    const double u = (s - g.t0) / g.dt();
    int k = static_cast<int>(std::floor(u));
    k = std::clamp(k, 0, g.n_steps - 1);
    const double w = std::clamp(u - k, 0.0, 1.0);
    if (w == 0.0) return a[k];
    return (1.0 - w) * a[k] + w * a[k + 1];
}

Eigen::VectorXd lerp(const std::vector<Eigen::VectorXd>& a, double s, const TimeGrid& g) {
    const double u = (s - g.t0) / g.dt();
    int k = static_cast<int>(std::floor(u));
    k = std::clamp(k, 0, g.n_steps - 1);
    const double w = std::clamp(u - k, 0.0, 1.0);
    if (w == 0.0) return a[k];
    return (1.0 - w) * a[k] + w * a[k + 1];
}

}  // namespace

const char* to_string(PhiConvention c) {
    return c == PhiConvention::TerminalZero ? "terminal-zero" : "paper-forward-integral";
}

Eigen::MatrixXd RiccatiSolution::P_at(double s) const { return lerp(P, s, grid); }
Eigen::MatrixXd RiccatiSolution::Pi_at(double s) const { return lerp(Pi, s, grid); }
Eigen::VectorXd RiccatiSolution::phi_at(double s) const {
    return convention == PhiConvention::TerminalZero ? lerp(phi_backward, s, grid)
                                                     : lerp(phi_paper, s, grid);
}

Eigen::MatrixXd GainSchedule::K0_at(double s) const { return lerp(K0, s, grid); }
Eigen::MatrixXd GainSchedule::K1_at(double s) const { return lerp(K1, s, grid); }
Eigen::VectorXd GainSchedule::c_at(double s) const { return lerp(c, s, grid); }

RiccatiSolution solve_riccati(const CoefficientSet& cs, PhiConvention convention) {
    const AssumptionReport rep = validate_assumptions(cs);
    if (!rep.passed()) {
        std::string what = "solve_riccati: coefficient assumptions fail:";
        for (const auto& v : rep.violations)
            what += " [" + v.check + " at node " + std::to_string(v.node) + "]";
        throw AssumptionError(what);
    }

    const TimeGrid& g = cs.grid;
    const int n = g.n_steps;
    const double h = -g.dt();  // backward step

    RiccatiSolution rs;
    rs.grid = g;
    rs.convention = convention;
    rs.P.resize(n + 1);
    rs.Pi.resize(n + 1);
    rs.phi_backward.resize(n + 1);
    rs.phi_paper.resize(n + 1);

    rs.P[n] = cs.H;
    rs.Pi[n] = cs.H + cs.Hbar;
    rs.phi_backward[n] = Eigen::VectorXd::Zero(cs.d);

    for (int k = n; k > 0; --k) {
        const double s1 = g.node(k);
        const double sm = s1 + 0.5 * h;
        const double s0 = g.node(k - 1);
        const Eigen::MatrixXd& P = rs.P[k];
        const Eigen::MatrixXd& Pi = rs.Pi[k];
        const Eigen::VectorXd& phi = rs.phi_backward[k];

        const Derivatives k1 = riccati_rhs(cs, s1, P, Pi, phi, k);
        const Derivatives k2 = riccati_rhs(cs, sm, P + 0.5 * h * k1.dP, Pi + 0.5 * h * k1.dPi,
                                           phi + 0.5 * h * k1.dphi, k);
        const Derivatives k3 = riccati_rhs(cs, sm, P + 0.5 * h * k2.dP, Pi + 0.5 * h * k2.dPi,
                                           phi + 0.5 * h * k2.dphi, k);
        const Derivatives k4 = riccati_rhs(cs, s0, P + h * k3.dP, Pi + h * k3.dPi,
                                           phi + h * k3.dphi, k - 1);

        Eigen::MatrixXd Pn = P + (h / 6.0) * (k1.dP + 2.0 * k2.dP + 2.0 * k3.dP + k4.dP);
        Eigen::MatrixXd Pin = Pi + (h / 6.0) * (k1.dPi + 2.0 * k2.dPi + 2.0 * k3.dPi + k4.dPi);
        rs.P[k - 1] = 0.5 * (Pn + Pn.transpose());
        rs.Pi[k - 1] = 0.5 * (Pin + Pin.transpose());
        rs.phi_backward[k - 1] =
            phi + (h / 6.0) * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi);
    }

    // Forward-integral offset: trapezoid quadrature of
    // Lambda1^T Sigma1^{-1} (r + rbar) + q + qbar from t0, for comparison only.
    std::vector<Eigen::VectorXd> integrand(n + 1);
    for (int k = 0; k <= n; ++k) {
        const CoefficientValues v = cs.at_node(k);
        const GainValues gv = gain_values(v, rs.P[k], rs.Pi[k]);
        const SigmaInverse s1 = invert_sigma(gv.Sigma1, "Sigma1", k);
        integrand[k] = gv.Lambda1.transpose() * (s1.inv * (v.r + v.rbar)) + v.q + v.qbar;
    }
    rs.phi_paper[0] = Eigen::VectorXd::Zero(cs.d);
    for (int k = 0; k < n; ++k)
        rs.phi_paper[k + 1] = rs.phi_paper[k] + 0.5 * g.dt() * (integrand[k] + integrand[k + 1]);

    return rs;
}

GainSchedule compute_gains(const CoefficientSet& cs, const RiccatiSolution& rs) {
    if (!(rs.grid == cs.grid))
        throw StructuralError("compute_gains: Riccati solution grid differs from coefficients");
    const AssumptionReport rep = validate_assumptions(cs);
    const int n = cs.grid.n_steps;

    GainSchedule gs;
    gs.grid = cs.grid;
    gs.convention = rs.convention;
    gs.delta2 = rep.delta2;
    gs.Lambda0.resize(n + 1);
    gs.Lambda1.resize(n + 1);
    gs.Sigma0.resize(n + 1);
    gs.Sigma1.resize(n + 1);
    gs.K0.resize(n + 1);
    gs.K1.resize(n + 1);
    gs.c.resize(n + 1);
    gs.c_truncated.resize(n + 1);
    gs.cond0.resize(n + 1);
    gs.cond1.resize(n + 1);

    const double floor = rep.delta2 * (1.0 - 1e-8);
    for (int k = 0; k <= n; ++k) {
        const CoefficientValues v = cs.at_node(k);
        GainValues g = gain_values(v, rs.P[k], rs.Pi[k]);
        const SigmaInverse s0 = invert_sigma(g.Sigma0, "Sigma0", k);
        const SigmaInverse s1 = invert_sigma(g.Sigma1, "Sigma1", k);
        if (s0.min_eig < floor)
            throw SingularityError("Sigma0 below coercivity floor at node " + std::to_string(k), k);
        if (s1.min_eig < floor)
            throw SingularityError("Sigma1 below coercivity floor at node " + std::to_string(k), k);
        gs.cond0[k] = s0.cond;
        gs.cond1[k] = s1.cond;
        gs.K0[k] = s0.inv * g.Lambda0;
        gs.K1[k] = s1.inv * g.Lambda1;
        const Eigen::MatrixXd Bs = (v.B + v.Bbar).transpose();
        gs.c[k] = s1.inv * (v.r + v.rbar + Bs * rs.phi_backward[k]);
        gs.c_truncated[k] = s1.inv * (v.r + v.rbar);
        gs.Lambda0[k] = std::move(g.Lambda0);
        gs.Lambda1[k] = std::move(g.Lambda1);
        gs.Sigma0[k] = std::move(g.Sigma0);
        gs.Sigma1[k] = std::move(g.Sigma1);
    }
    return gs;
}

}  // namespace mflq
