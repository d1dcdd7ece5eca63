#include "mflq/model.hpp"

#include <cmath>

#include "mflq/errors.hpp"

namespace mflq {

namespace {

constexpr double kSymTol = 1e-12;
constexpr double kZeroTol = 1e-14;

void require_shape(const CoefficientSchedule& s, Eigen::Index rows, Eigen::Index cols,
                   const std::string& name) {
    if (s.rows() != rows || s.cols() != cols)
        throw StructuralError("coefficient " + name + ": expected " + std::to_string(rows) +
                              "x" + std::to_string(cols) + ", got " + std::to_string(s.rows()) +
                              "x" + std::to_string(s.cols()));
}

double asymmetry(const Eigen::MatrixXd& M) {
    return (M - M.transpose()).cwiseAbs().maxCoeff();
}

double min_eig(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()),
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double op_norm(const Eigen::MatrixXd& M) {
    return M.jacobiSvd().singularValues().maxCoeff();
}

}  // namespace

CoefficientSet CoefficientSet::zeros(int d, int m, const TimeGrid& grid) {
    if (d < 1 || m < 1) throw StructuralError("CoefficientSet: dimensions must be positive");
    CoefficientSet cs;
    cs.d = d;
    cs.m = m;
    cs.grid = grid;
    auto dd = [&] { return CoefficientSchedule::zero(d, d); };
    auto dm = [&] { return CoefficientSchedule::zero(d, m); };
    auto mm = [&] { return CoefficientSchedule::zero(m, m); };
    auto md = [&] { return CoefficientSchedule::zero(m, d); };
    cs.A = dd(); cs.Abar = dd(); cs.C = dd(); cs.Cbar = dd(); cs.F = dd(); cs.Fbar = dd();
    cs.B = dm(); cs.Bbar = dm(); cs.D = dm(); cs.Dbar = dm(); cs.G = dm(); cs.Gbar = dm();
    cs.Q = dd(); cs.Qbar = dd(); cs.R = mm(); cs.Rbar = mm();
    cs.S = md(); cs.Sbar = md(); cs.S1bar = md(); cs.S2bar = md();
    cs.q = CoefficientSchedule::zero(d, 1);
    cs.qbar = CoefficientSchedule::zero(d, 1);
    cs.r = CoefficientSchedule::zero(m, 1);
    cs.rbar = CoefficientSchedule::zero(m, 1);
    cs.H = Eigen::MatrixXd::Zero(d, d);
    cs.Hbar = Eigen::MatrixXd::Zero(d, d);
    return cs;
}

void CoefficientSet::check_shapes() const {
    require_shape(A, d, d, "A"); require_shape(Abar, d, d, "Abar");
    require_shape(C, d, d, "C"); require_shape(Cbar, d, d, "Cbar");
    require_shape(F, d, d, "F"); require_shape(Fbar, d, d, "Fbar");
    require_shape(B, d, m, "B"); require_shape(Bbar, d, m, "Bbar");
    require_shape(D, d, m, "D"); require_shape(Dbar, d, m, "Dbar");
    require_shape(G, d, m, "G"); require_shape(Gbar, d, m, "Gbar");
    require_shape(Q, d, d, "Q"); require_shape(Qbar, d, d, "Qbar");
    require_shape(R, m, m, "R"); require_shape(Rbar, m, m, "Rbar");
    require_shape(S, m, d, "S"); require_shape(Sbar, m, d, "Sbar");
    require_shape(S1bar, m, d, "S1bar"); require_shape(S2bar, m, d, "S2bar");
    require_shape(q, d, 1, "q"); require_shape(qbar, d, 1, "qbar");
    require_shape(r, m, 1, "r"); require_shape(rbar, m, 1, "rbar");
    if (H.rows() != d || H.cols() != d) throw StructuralError("coefficient H: wrong shape");
    if (Hbar.rows() != d || Hbar.cols() != d) throw StructuralError("coefficient Hbar: wrong shape");
    const CoefficientSchedule* scheds[] = {&A, &Abar, &C, &Cbar, &F, &Fbar, &B, &Bbar,
                                           &D, &Dbar, &G, &Gbar, &Q, &Qbar, &R, &Rbar,
                                           &S, &Sbar, &S1bar, &S2bar, &q, &qbar, &r, &rbar};
    const char* names[] = {"A", "Abar", "C", "Cbar", "F", "Fbar", "B", "Bbar",
                           "D", "Dbar", "G", "Gbar", "Q", "Qbar", "R", "Rbar",
                           "S", "Sbar", "S1bar", "S2bar", "q", "qbar", "r", "rbar"};
    for (std::size_t i = 0; i < std::size(scheds); ++i) scheds[i]->check_grid(grid, names[i]);
}

CoefficientValues CoefficientSet::at(double s) const {
    CoefficientValues v;
    v.A = A.at(s, grid); v.Abar = Abar.at(s, grid);
    v.C = C.at(s, grid); v.Cbar = Cbar.at(s, grid);
    v.F = F.at(s, grid); v.Fbar = Fbar.at(s, grid);
    v.B = B.at(s, grid); v.Bbar = Bbar.at(s, grid);
    v.D = D.at(s, grid); v.Dbar = Dbar.at(s, grid);
    v.G = G.at(s, grid); v.Gbar = Gbar.at(s, grid);
    v.Q = Q.at(s, grid); v.Qbar = Qbar.at(s, grid);
    v.R = R.at(s, grid); v.Rbar = Rbar.at(s, grid);
    v.S = S.at(s, grid); v.Sbar = Sbar.at(s, grid);
    v.S1bar = S1bar.at(s, grid); v.S2bar = S2bar.at(s, grid);
    v.q = q.at(s, grid); v.qbar = qbar.at(s, grid);
    v.r = r.at(s, grid); v.rbar = rbar.at(s, grid);
    return v;
}

CoefficientValues CoefficientSet::at_node(int k) const {
    CoefficientValues v;
    v.A = A.at_node(k, grid); v.Abar = Abar.at_node(k, grid);
    v.C = C.at_node(k, grid); v.Cbar = Cbar.at_node(k, grid);
    v.F = F.at_node(k, grid); v.Fbar = Fbar.at_node(k, grid);
    v.B = B.at_node(k, grid); v.Bbar = Bbar.at_node(k, grid);
    v.D = D.at_node(k, grid); v.Dbar = Dbar.at_node(k, grid);
    v.G = G.at_node(k, grid); v.Gbar = Gbar.at_node(k, grid);
    v.Q = Q.at_node(k, grid); v.Qbar = Qbar.at_node(k, grid);
    v.R = R.at_node(k, grid); v.Rbar = Rbar.at_node(k, grid);
    v.S = S.at_node(k, grid); v.Sbar = Sbar.at_node(k, grid);
    v.S1bar = S1bar.at_node(k, grid); v.S2bar = S2bar.at_node(k, grid);
    v.q = q.at_node(k, grid); v.qbar = qbar.at_node(k, grid);
    v.r = r.at_node(k, grid); v.rbar = rbar.at_node(k, grid);
    return v;
}

AssumptionReport validate_assumptions(const CoefficientSet& cs) {
    cs.check_shapes();

    // Symmetry is structural: it separates malformed inputs from model choices.
    for (int k = 0; k <= cs.grid.n_steps; ++k) {
        if (asymmetry(cs.Q.at_node(k, cs.grid)) > kSymTol ||
            asymmetry(cs.Qbar.at_node(k, cs.grid)) > kSymTol)
            throw StructuralError("Q/Qbar not symmetric at node " + std::to_string(k));
        if (asymmetry(cs.R.at_node(k, cs.grid)) > kSymTol ||
            asymmetry(cs.Rbar.at_node(k, cs.grid)) > kSymTol)
            throw StructuralError("R/Rbar not symmetric at node " + std::to_string(k));
    }
    if (asymmetry(cs.H) > kSymTol || asymmetry(cs.Hbar) > kSymTol)
        throw StructuralError("H/Hbar not symmetric");

    AssumptionReport rep;
    rep.delta1 = std::numeric_limits<double>::infinity();
    rep.delta2 = std::numeric_limits<double>::infinity();
    rep.s_norm_sq = 0.0;

    const double h_min = min_eig(cs.H);
    const double hh_min = min_eig(cs.H + cs.Hbar);
    rep.h_ok = h_min >= -kSymTol && hh_min >= -kSymTol;
    if (h_min < -kSymTol) rep.violations.push_back({"H >= 0", 0, h_min});
    if (hh_min < -kSymTol) rep.violations.push_back({"H + Hbar >= 0", 0, hh_min});

    for (int k = 0; k <= cs.grid.n_steps; ++k) {
        const Eigen::MatrixXd Q = cs.Q.at_node(k, cs.grid);
        const Eigen::MatrixXd Qs = Q + cs.Qbar.at_node(k, cs.grid);
        const Eigen::MatrixXd R = cs.R.at_node(k, cs.grid);
        const Eigen::MatrixXd Rs = R + cs.Rbar.at_node(k, cs.grid);
        const double q1 = min_eig(Q), q2 = min_eig(Qs);
        const double r1 = min_eig(R), r2 = min_eig(Rs);
        rep.delta1 = std::min({rep.delta1, q1, q2});
        rep.delta2 = std::min({rep.delta2, r1, r2});
        if (q1 < -kSymTol) rep.violations.push_back({"Q >= delta1 I", k, q1});
        if (q2 < -kSymTol) rep.violations.push_back({"Q + Qbar >= delta1 I", k, q2});
        if (r1 <= 0.0) rep.violations.push_back({"R >= delta2 I", k, r1});
        if (r2 <= 0.0) rep.violations.push_back({"R + Rbar >= delta2 I", k, r2});

        const Eigen::MatrixXd S = cs.S.at_node(k, cs.grid);
        const Eigen::MatrixXd Ss = S + cs.Sbar.at_node(k, cs.grid);
        const double sn = op_norm(S), ssn = op_norm(Ss);
        rep.s_norm_sq = std::max({rep.s_norm_sq, sn * sn, ssn * ssn});
    }

    rep.q_ok = rep.delta1 >= -kSymTol;
    rep.r_ok = rep.delta2 > 0.0;
    if (rep.delta1 < 0.0 && rep.delta1 >= -kSymTol) rep.delta1 = 0.0;

    const bool s_is_zero = cs.S.is_zero_on(cs.grid, kZeroTol) && cs.Sbar.is_zero_on(cs.grid, kZeroTol);
    if (s_is_zero) {
        rep.s_ok = true;  // delta1 = 0 admissible only with vanishing cross terms
    } else if (rep.delta1 > 0.0 && rep.s_norm_sq < rep.delta1 * rep.delta2) {
        rep.s_ok = true;
    } else {
        rep.s_ok = false;
        rep.violations.push_back(
            {"||S||^2, ||S+Sbar||^2 < delta1 delta2", 0,
             rep.s_norm_sq - rep.delta1 * std::max(rep.delta2, 0.0)});
    }
    return rep;
}

ReducibilityReport is_mfg_reducible(const CoefficientSet& cs) {
    ReducibilityReport rep;
    struct Item { const CoefficientSchedule* s; const char* name; };
    const Item items[] = {{&cs.Abar, "Abar"}, {&cs.Bbar, "Bbar"}, {&cs.Cbar, "Cbar"},
                          {&cs.Dbar, "Dbar"}, {&cs.Fbar, "Fbar"}, {&cs.Gbar, "Gbar"},
                          {&cs.qbar, "qbar"}, {&cs.rbar, "rbar"}};
    for (const auto& it : items)
        if (!it.s->is_zero_on(cs.grid, kZeroTol)) rep.violations.push_back(it.name);
    if (cs.Sbar.max_diff_on(cs.S1bar, cs.grid) > kZeroTol)
        rep.violations.push_back("Sbar != S1bar");
    if (cs.Sbar.max_diff_on(cs.S2bar, cs.grid) > kZeroTol)
        rep.violations.push_back("Sbar != S2bar");
    if (cs.S1bar.max_diff_on(cs.S2bar, cs.grid) > kZeroTol)
        rep.violations.push_back("S1bar != S2bar");
    rep.reducible = rep.violations.empty();
    return rep;
}

}  // namespace mflq
