#include "mflq/verify.hpp"

#include <cmath>

#include "mflq/errors.hpp"

namespace mflq {

namespace {

// Conditional means of the reconstructed adjoints. The reconstruction is
// affine in the state, so the particle average equals the reconstruction
// evaluated at the mean state; this keeps the means exactly consistent with
// the per-particle formulas in both mean modes.
AdjointState mean_adjoint(const RiccatiSolution& rs, const GainSchedule& gs,
                          const CoefficientSet& cs, int node, const Eigen::VectorXd& xbar) {
    return reconstruct_adjoint_node(rs, gs, cs, node, xbar, xbar);
}

}  // namespace

ResidualReport coupling_residual(const EnsembleBatch& b, const RiccatiSolution& rs,
                                 const GainSchedule& gs, const CoefficientSet& cs) {
    const int n = cs.grid.n_steps;
    ResidualReport rep;
    rep.n_steps = n;
    rep.profile.assign(n + 1, 0.0);
    std::vector<double> count(n + 1, 0.0);

    Eigen::VectorXd xbar(b.d), vbar(b.m), x(b.d), v(b.m), res(b.m);
    for (int k = 0; k < b.K; ++k) {
        for (int j = 0; j <= n; ++j) {
            const CoefficientValues cvj = cs.at_node(j);
            xbar = b.mean_state(k, j);
            vbar = b.mean_control(k, j);
            const AdjointState bar = mean_adjoint(rs, gs, cs, j, xbar);
            for (int i = 0; i < b.M; ++i) {
                x = b.state(k, i, j);
                v = b.control(k, i, j);
                const AdjointState a = reconstruct_adjoint_node(rs, gs, cs, j, x, xbar);
                res.noalias() = cvj.B.transpose() * a.Y;
                res.noalias() += cvj.Bbar.transpose() * bar.Y;
                res.noalias() += cvj.D.transpose() * a.Z;
                res.noalias() += cvj.Dbar.transpose() * bar.Z;
                res.noalias() += cvj.G.transpose() * a.Z0;
                res.noalias() += cvj.Gbar.transpose() * bar.Z0;
                res.noalias() += cvj.R * v;
                res.noalias() += cvj.Rbar * vbar;
                res.noalias() += cvj.S * x;
                res.noalias() += cvj.Sbar * xbar;
                res += cvj.r + cvj.rbar;
                const double sq = res.squaredNorm();
                rep.profile[j] += sq;
                count[j] += b.m;
                rep.max_abs = std::max(rep.max_abs, res.cwiseAbs().maxCoeff());
            }
        }
    }
    double total = 0.0, total_count = 0.0;
    for (int j = 0; j <= n; ++j) {
        total += rep.profile[j];
        total_count += count[j];
        rep.profile[j] = std::sqrt(rep.profile[j] / count[j]);
    }
    rep.rms = std::sqrt(total / total_count);
    return rep;
}

ResidualReport bsde_residual(const EnsembleBatch& b, const NoiseBundle& noise,
                             const RiccatiSolution& rs, const GainSchedule& gs,
                             const CoefficientSet& cs) {
    if (!(noise.grid == b.grid) || noise.K != b.K || noise.M != b.M)
        throw StructuralError("bsde_residual: noise bundle does not match the batch");
    const int n = cs.grid.n_steps;
    const double dt = cs.grid.dt();

    ResidualReport rep;
    rep.n_steps = n;
    rep.profile.assign(n, 0.0);
    std::vector<double> count(n, 0.0);

    std::vector<CoefficientValues> cv;
    cv.reserve(n + 1);
    for (int j = 0; j <= n; ++j) cv.push_back(cs.at_node(j));

    std::vector<AdjointState> along(n + 1);
    std::vector<AdjointState> bar(n + 1);
    Eigen::VectorXd x(b.d), xbar(b.d), v(b.m), vbar(b.m), drift(b.d), rho(b.d), acc(b.d);

    double total = 0.0, total_count = 0.0;
    for (int k = 0; k < b.K; ++k) {
        for (int j = 0; j <= n; ++j) {
            xbar = b.mean_state(k, j);
            bar[j] = mean_adjoint(rs, gs, cs, j, xbar);
        }
        for (int i = 0; i < b.M; ++i) {
            for (int j = 0; j <= n; ++j) {
                x = b.state(k, i, j);
                xbar = b.mean_state(k, j);
                along[j] = reconstruct_adjoint_node(rs, gs, cs, j, x, xbar);
            }
            {
                const Eigen::VectorXd xT = b.state(k, i, n);
                const Eigen::VectorXd xbT = b.mean_state(k, n);
                const double mism = (along[n].Y - cs.H * xT - cs.Hbar * xbT).cwiseAbs().maxCoeff();
                rep.terminal_mismatch = std::max(rep.terminal_mismatch, mism);
            }
            // Backward accumulation of the one-step residuals.
            acc.setZero();
            for (int j = n - 1; j >= 0; --j) {
                x = b.state(k, i, j);
                xbar = b.mean_state(k, j);
                v = b.control(k, i, j);
                vbar = b.mean_control(k, j);
                const CoefficientValues& c = cv[j];
                drift.noalias() = c.A.transpose() * along[j].Y;
                drift.noalias() += c.Abar.transpose() * bar[j].Y;
                drift.noalias() += c.C.transpose() * along[j].Z;
                drift.noalias() += c.Cbar.transpose() * bar[j].Z;
                drift.noalias() += c.F.transpose() * along[j].Z0;
                drift.noalias() += c.Fbar.transpose() * bar[j].Z0;
                drift.noalias() += c.Q * x;
                drift.noalias() += c.Qbar * xbar;
                drift.noalias() += c.S.transpose() * v;
                drift.noalias() += c.Sbar.transpose() * vbar;
                drift += c.q + c.qbar;
                rho = along[j + 1].Y - along[j].Y + dt * drift -
                      noise.increment(k, i, j) * along[j].Z -
                      noise.common_increment(k, j) * along[j].Z0;
                acc += rho;
                const double sq = acc.squaredNorm();
                rep.profile[j] += sq;
                count[j] += b.d;
                total += sq;
                total_count += b.d;
                rep.max_abs = std::max(rep.max_abs, acc.cwiseAbs().maxCoeff());
            }
        }
    }
    for (int j = 0; j < n; ++j) rep.profile[j] = std::sqrt(rep.profile[j] / count[j]);
    rep.rms = std::sqrt(total / total_count);
    return rep;
}

double convergence_slope(const std::vector<double>& dts, const std::vector<double>& rms) {
    if (dts.size() != rms.size() || dts.size() < 2)
        throw StructuralError("convergence_slope: need matching arrays of length >= 2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(dts.size());
    for (std::size_t i = 0; i < dts.size(); ++i) {
        const double lx = std::log(dts[i]), ly = std::log(rms[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<GateauxRow> gateaux_test(const CoefficientSet& cs, const GainSchedule& gs,
                                     const RiccatiSolution& rs,
                                     const std::vector<std::pair<std::string, Policy>>& directions,
                                     const std::vector<double>& h_values, const NoiseBundle& noise,
                                     MeanMode mode, const Policy* base) {
    if (h_values.empty()) throw StructuralError("gateaux_test: need at least one h value");
    const Policy base_policy = base ? *base : optimal_policy(gs);
    const CostReport rep0 = evaluate_costs(simulate_ensemble(cs, gs, rs, noise, mode, &base_policy), cs);
    const int K = noise.K;
    double h_min = h_values.front();
    for (double h : h_values) h_min = std::min(h_min, h);

    auto cost_at = [&](const Policy& dir, double h) {
        const Policy p = perturbed_policy(base_policy, dir, h);
        return evaluate_costs(simulate_ensemble(cs, gs, rs, noise, mode, &p), cs);
    };

    std::vector<GateauxRow> rows;
    for (const auto& [name, dir] : directions) {
        GateauxRow row;
        row.direction = name;
        row.h = h_values;

        const CostReport plus = cost_at(dir, h_min);
        const CostReport minus = cost_at(dir, -h_min);
        std::vector<double> slopes(K);
        for (int k = 0; k < K; ++k)
            slopes[k] = (plus.per_path_lq[k] - minus.per_path_lq[k]) / (2.0 * h_min);
        double mean = 0.0;
        for (double s : slopes) mean += s;
        mean /= K;
        double var = 0.0;
        for (double s : slopes) var += (s - mean) * (s - mean);
        row.slope = mean;
        row.slope_se = K > 1 ? std::sqrt(var / (K - 1.0) / K) : 0.0;

        for (double h : h_values) {
            const CostReport reph = (h == h_min) ? plus : cost_at(dir, h);
            std::vector<double> d(K);
            for (int k = 0; k < K; ++k) d[k] = reph.per_path_lq[k] - rep0.per_path_lq[k];
            double dm = 0.0;
            for (double x : d) dm += x;
            dm /= K;
            double dv = 0.0;
            for (double x : d) dv += (x - dm) * (x - dm);
            row.dJ.push_back(dm);
            row.dJ_se.push_back(K > 1 ? std::sqrt(dv / (K - 1.0) / K) : 0.0);
        }

        // Pure-quadratic least squares dJ = a h^2 over the positive h values.
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < row.h.size(); ++i) {
            num += row.h[i] * row.h[i] * row.dJ[i];
            den += row.h[i] * row.h[i] * row.h[i] * row.h[i];
        }
        const double a = den > 0.0 ? num / den : 0.0;
        row.curvature = 2.0 * a;
        double ss_res = 0.0, ss_tot = 0.0, dbar = 0.0;
        for (double x : row.dJ) dbar += x;
        dbar /= row.dJ.size();
        for (std::size_t i = 0; i < row.h.size(); ++i) {
            ss_res += (row.dJ[i] - a * row.h[i] * row.h[i]) * (row.dJ[i] - a * row.h[i] * row.h[i]);
            ss_tot += (row.dJ[i] - dbar) * (row.dJ[i] - dbar);
        }
        row.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Eigen::MatrixXd> dp_oracle(const CoefficientSet& cs, const TimeGrid& grid) {
    // Classical sub-case only.
    const double tol = 1e-14;
    const bool classical = cs.Abar.is_zero_on(grid, tol) && cs.Bbar.is_zero_on(grid, tol) &&
                           cs.Cbar.is_zero_on(grid, tol) && cs.Dbar.is_zero_on(grid, tol) &&
                           cs.Fbar.is_zero_on(grid, tol) && cs.Gbar.is_zero_on(grid, tol) &&
                           cs.Qbar.is_zero_on(grid, tol) && cs.Rbar.is_zero_on(grid, tol) &&
                           cs.Sbar.is_zero_on(grid, tol) && cs.S.is_zero_on(grid, tol) &&
                           cs.Hbar.cwiseAbs().maxCoeff() <= tol;
    if (!classical)
        throw AssumptionError("dp_oracle: requires all barred coefficients and S to vanish");

    const int n = grid.n_steps;
    const double dt = grid.dt();
    std::vector<Eigen::MatrixXd> P(n + 1);
    P[n] = cs.H;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(cs.d, cs.d);
    for (int k = n - 1; k >= 0; --k) {
        const double s = grid.node(k);
        const Eigen::MatrixXd A = cs.A.at(s, grid);
        const Eigen::MatrixXd B = cs.B.at(s, grid);
        const Eigen::MatrixXd C = cs.C.at(s, grid);
        const Eigen::MatrixXd D = cs.D.at(s, grid);
        const Eigen::MatrixXd F = cs.F.at(s, grid);
        const Eigen::MatrixXd G = cs.G.at(s, grid);
        const Eigen::MatrixXd Q = cs.Q.at(s, grid);
        const Eigen::MatrixXd R = cs.R.at(s, grid);
        const Eigen::MatrixXd& P1 = P[k + 1];
        const Eigen::MatrixXd M = I + dt * A;
        const Eigen::MatrixXd Qxx =
            dt * Q + M.transpose() * P1 * M + dt * (C.transpose() * P1 * C + F.transpose() * P1 * F);
        const Eigen::MatrixXd Quu = dt * R + dt * dt * B.transpose() * P1 * B +
                                    dt * (D.transpose() * P1 * D + G.transpose() * P1 * G);
        const Eigen::MatrixXd Qux =
            dt * B.transpose() * P1 * M + dt * (D.transpose() * P1 * C + G.transpose() * P1 * F);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(0.5 * (Quu + Quu.transpose()));
        if (ldlt.info() != Eigen::Success)
            throw SingularityError("dp_oracle: Quu not factorizable at node " + std::to_string(k),
                                   k);
        Eigen::MatrixXd Pk = Qxx - Qux.transpose() * ldlt.solve(Qux);
        P[k] = 0.5 * (Pk + Pk.transpose());
    }
    return P;
}

}  // namespace mflq
