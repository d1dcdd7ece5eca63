#include "mflq/simulate.hpp"

#include <cmath>

#include "mflq/errors.hpp"

namespace mflq {

const char* to_string(MeanMode m) { return m == MeanMode::Estimated ? "estimated-mean" : "exact-mean"; }

Policy optimal_policy(const GainSchedule& gs) {
    return [g = &gs](const Eigen::Ref<const Eigen::VectorXd>& X,
                     const Eigen::Ref<const Eigen::VectorXd>& Xbar, double /*s*/, int node,
                     Eigen::Ref<Eigen::VectorXd> out) {
        out.noalias() = -(g->K0[node] * (X - Xbar));
        out.noalias() -= g->K1[node] * Xbar;
        out -= g->c[node];
    };
}

Policy perturbed_policy(Policy base, Policy direction, double h) {
    return [base = std::move(base), direction = std::move(direction), h](
               const Eigen::Ref<const Eigen::VectorXd>& X,
               const Eigen::Ref<const Eigen::VectorXd>& Xbar, double s, int node,
               Eigen::Ref<Eigen::VectorXd> out) {
        base(X, Xbar, s, node, out);
        Eigen::VectorXd dir(out.size());
        direction(X, Xbar, s, node, dir);
        out += h * dir;
    };
}

EnsembleBatch simulate_ensemble(const CoefficientSet& cs, const GainSchedule& gs,
                                const RiccatiSolution& rs, const NoiseBundle& noise, MeanMode mode,
                                const Policy* override_policy) {
    if (!(noise.grid == cs.grid) || !(rs.grid == cs.grid) || !(gs.grid == cs.grid))
        throw StructuralError("simulate_ensemble: inputs on different grids");
    const int n = cs.grid.n_steps;
    const int K = noise.K, M = noise.M, d = cs.d, m = cs.m;
    const double dt = cs.grid.dt();

    EnsembleBatch b;
    b.grid = cs.grid;
    b.K = K;
    b.M = M;
    b.d = d;
    b.m = m;
    b.mode = mode;
    b.X.assign(static_cast<std::size_t>(K) * M * (n + 1) * d, 0.0);
    b.V.assign(static_cast<std::size_t>(K) * M * (n + 1) * m, 0.0);
    b.Xbar.assign(static_cast<std::size_t>(K) * (n + 1) * d, 0.0);
    b.Vbar.assign(static_cast<std::size_t>(K) * (n + 1) * m, 0.0);

    // Per-node coefficient cache shared by every path.
    std::vector<CoefficientValues> cv;
    cv.reserve(n + 1);
    for (int j = 0; j <= n; ++j) cv.push_back(cs.at_node(j));

    const Policy base = optimal_policy(gs);
    const Policy& policy = override_policy ? *override_policy : base;

    auto xoff = [&](int k, int i, int node) {
        return (((static_cast<std::size_t>(k) * M + i) * (n + 1)) + node) * d;
    };
    auto voff = [&](int k, int i, int node) {
        return (((static_cast<std::size_t>(k) * M + i) * (n + 1)) + node) * m;
    };
    auto xboff = [&](int k, int node) { return (static_cast<std::size_t>(k) * (n + 1) + node) * d; };
    auto vboff = [&](int k, int node) { return (static_cast<std::size_t>(k) * (n + 1) + node) * m; };

    Eigen::VectorXd xb(d), vb(m), drift(d), diffw(d), diffw0(d), xbar_next(d);
    Eigen::VectorXd mean_drift(d), mean_diff(d);

    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < M; ++i)
            Eigen::Map<Eigen::VectorXd>(b.X.data() + xoff(k, i, 0), d) = noise.initial(k, i);

        // Exact mode: the mean process starts from the distribution mean, the
        // initial condition being independent of the common noise.
        if (mode == MeanMode::Exact)
            Eigen::Map<Eigen::VectorXd>(b.Xbar.data() + xboff(k, 0), d) = noise.init_mean;

        for (int j = 0; j <= n; ++j) {
            const double s = cs.grid.node(j);
            const CoefficientValues& v = cv[j];

            if (mode == MeanMode::Estimated) {
                xb.setZero();
                for (int i = 0; i < M; ++i)
                    xb += Eigen::Map<const Eigen::VectorXd>(b.X.data() + xoff(k, i, j), d);
                xb /= M;
                Eigen::Map<Eigen::VectorXd>(b.Xbar.data() + xboff(k, j), d) = xb;
            } else {
                xb = Eigen::Map<const Eigen::VectorXd>(b.Xbar.data() + xboff(k, j), d);
            }

            // Controls at this node; the mean control is the empirical average
            // in estimated mode and the optimal mean law in exact mode.
            for (int i = 0; i < M; ++i) {
                Eigen::Map<Eigen::VectorXd> vi(b.V.data() + voff(k, i, j), m);
                policy(Eigen::Map<const Eigen::VectorXd>(b.X.data() + xoff(k, i, j), d), xb, s, j,
                       vi);
            }
            if (mode == MeanMode::Estimated) {
                vb.setZero();
                for (int i = 0; i < M; ++i)
                    vb += Eigen::Map<const Eigen::VectorXd>(b.V.data() + voff(k, i, j), m);
                vb /= M;
            } else {
                vb = mean_control_node(gs, j, xb);
            }
            Eigen::Map<Eigen::VectorXd>(b.Vbar.data() + vboff(k, j), m) = vb;

            if (j == n) break;

            const double dw0 = noise.common_increment(k, j);
            for (int i = 0; i < M; ++i) {
                Eigen::Map<const Eigen::VectorXd> xi(b.X.data() + xoff(k, i, j), d);
                Eigen::Map<const Eigen::VectorXd> vi(b.V.data() + voff(k, i, j), m);
                const double dw = noise.increment(k, i, j);
                drift.noalias() = v.A * xi;
                drift.noalias() += v.Abar * xb;
                drift.noalias() += v.B * vi;
                drift.noalias() += v.Bbar * vb;
                diffw.noalias() = v.C * xi;
                diffw.noalias() += v.Cbar * xb;
                diffw.noalias() += v.D * vi;
                diffw.noalias() += v.Dbar * vb;
                diffw0.noalias() = v.F * xi;
                diffw0.noalias() += v.Fbar * xb;
                diffw0.noalias() += v.G * vi;
                diffw0.noalias() += v.Gbar * vb;
                Eigen::Map<Eigen::VectorXd> xn(b.X.data() + xoff(k, i, j + 1), d);
                xn = xi + dt * drift + dw * diffw + dw0 * diffw0;
                if (!xn.allFinite())
                    throw DivergenceError("simulate_ensemble: non-finite state at node " +
                                              std::to_string(j + 1),
                                          j + 1);
            }

            if (mode == MeanMode::Exact) {
                // Mean process against the common noise alone:
                // dXbar = [(A+Abar) Xbar + (B+Bbar) vbar] ds + [(F+Fbar) Xbar + (G+Gbar) vbar] dW0.
                mean_drift.noalias() = (v.A + v.Abar) * xb;
                mean_drift.noalias() += (v.B + v.Bbar) * vb;
                mean_diff.noalias() = (v.F + v.Fbar) * xb;
                mean_diff.noalias() += (v.G + v.Gbar) * vb;
                xbar_next = xb + dt * mean_drift + dw0 * mean_diff;
                Eigen::Map<Eigen::VectorXd>(b.Xbar.data() + xboff(k, j + 1), d) = xbar_next;
            }
        }
    }
    return b;
}

namespace {

double quad(const Eigen::MatrixXd& M, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return x.dot(M * y);
}

}  // namespace

CostReport evaluate_costs(const EnsembleBatch& b, const CoefficientSet& cs) {
    if (!(b.grid == cs.grid))
        throw StructuralError("evaluate_costs: batch grid differs from coefficients");
    const int n = cs.grid.n_steps;
    const double dt = cs.grid.dt();

    std::vector<CoefficientValues> cv;
    cv.reserve(n + 1);
    for (int j = 0; j <= n; ++j) cv.push_back(cs.at_node(j));

    CostReport rep;
    rep.per_path_lq.resize(b.K);
    rep.per_path_mfg.resize(b.K);

    Eigen::VectorXd x(b.d), u(b.m), xb(b.d), ub(b.m);
    for (int k = 0; k < b.K; ++k) {
        double lq_k = 0.0, mfg_k = 0.0;
        for (int i = 0; i < b.M; ++i) {
            double lq = 0.0, mfg = 0.0;
            for (int j = 0; j <= n; ++j) {
                const CoefficientValues& v = cv[j];
                x = b.state(k, i, j);
                u = b.control(k, i, j);
                xb = b.mean_state(k, j);
                ub = b.mean_control(k, j);
                const double w = (j == 0 || j == n) ? 0.5 * dt : dt;
                const double shared = quad(v.Q, x, x) + quad(v.R, u, u) + 2.0 * quad(v.S, x, u) +
                                      2.0 * v.q.dot(x) + 2.0 * v.r.dot(u) + 2.0 * v.qbar.dot(xb) +
                                      2.0 * v.rbar.dot(ub);
                lq += w * (shared + quad(v.Qbar, xb, xb) + quad(v.Rbar, ub, ub) +
                           2.0 * quad(v.Sbar, xb, ub));
                mfg += w * (shared + 2.0 * quad(v.Qbar, xb, x) + 2.0 * quad(v.Rbar, ub, u) +
                            2.0 * quad(v.S1bar, xb, u) + 2.0 * quad(v.S2bar, x, ub));
            }
            const Eigen::VectorXd xT = b.state(k, i, n);
            const Eigen::VectorXd xbT = b.mean_state(k, n);
            lq += quad(cs.H, xT, xT) + quad(cs.Hbar, xbT, xbT);
            mfg += quad(cs.H, xT, xT) + 2.0 * quad(cs.Hbar, xbT, xT);
            lq_k += lq;
            mfg_k += mfg;
        }
        rep.per_path_lq[k] = lq_k / b.M;
        rep.per_path_mfg[k] = mfg_k / b.M;
    }

    auto mean_se = [&](const std::vector<double>& a, double& mean, double& se) {
        mean = 0.0;
        for (double x : a) mean += x;
        mean /= a.size();
        double var = 0.0;
        for (double x : a) var += (x - mean) * (x - mean);
        se = a.size() > 1 ? std::sqrt(var / (a.size() - 1.0) / a.size()) : 0.0;
    };
    mean_se(rep.per_path_lq, rep.j_lq, rep.se_lq);
    mean_se(rep.per_path_mfg, rep.j_mfg, rep.se_mfg);
    std::vector<double> diff(b.K);
    for (int k = 0; k < b.K; ++k) diff[k] = rep.per_path_mfg[k] - rep.per_path_lq[k];
    mean_se(diff, rep.poa, rep.se_poa);
    return rep;
}

}  // namespace mflq
