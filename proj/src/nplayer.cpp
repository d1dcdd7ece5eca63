#include "mflq/nplayer.hpp"

#include <cmath>

#include "mflq/errors.hpp"
#include "mflq/feedback.hpp"

namespace mflq {

const char* to_string(CandidateFamily f) {
    switch (f) {
        case CandidateFamily::Scaled: return "scaled";
        case CandidateFamily::LeaveOneOut: return "loo-refit";
        case CandidateFamily::Shift: return "shift";
        case CandidateFamily::All: return "all";
    }
    return "?";
}

GameBatch simulate_game(const CoefficientSet& cs, const GainSchedule& gs,
                        const RiccatiSolution& rs, int N, std::uint64_t seed, int replications,
                        const InitSpec& init, int deviator, const GamePolicy* deviation) {
    if (N < 2) throw StructuralError("simulate_game: need at least two players");
    if (replications < 1) throw StructuralError("simulate_game: need at least one realization");
    if (deviator >= N) throw StructuralError("simulate_game: deviator index out of range");
    const ReducibilityReport red = is_mfg_reducible(cs);
    if (!red.reducible) {
        std::string what = "simulate_game: coefficients are not game-reducible:";
        for (const auto& v : red.violations) what += " " + v;
        throw AssumptionError(what);
    }
    if (!(rs.grid == cs.grid) || !(gs.grid == cs.grid))
        throw StructuralError("simulate_game: inputs on different grids");

    const int n = cs.grid.n_steps;
    const double dt = cs.grid.dt();
    const int d = cs.d, m = cs.m;

    // Players take the role of particles in the noise bundle: W_i per player,
    // one common path per realization, i.i.d. initial reserves.
    const NoiseBundle noise = generate_noise(cs.grid, seed, replications, N, init);

    GameBatch b;
    b.grid = cs.grid;
    b.R = replications;
    b.N = N;
    b.d = d;
    b.m = m;
    b.deviator = deviation ? deviator : -1;
    b.X.assign(static_cast<std::size_t>(replications) * N * (n + 1) * d, 0.0);
    b.V.assign(static_cast<std::size_t>(replications) * N * (n + 1) * m, 0.0);
    b.Xbar_mf.assign(static_cast<std::size_t>(replications) * (n + 1) * d, 0.0);

    std::vector<CoefficientValues> cv;
    cv.reserve(n + 1);
    for (int j = 0; j <= n; ++j) cv.push_back(cs.at_node(j));

    auto xoff = [&](int r, int i, int node) {
        return (((static_cast<std::size_t>(r) * N + i) * (n + 1)) + node) * d;
    };
    auto voff = [&](int r, int i, int node) {
        return (((static_cast<std::size_t>(r) * N + i) * (n + 1)) + node) * m;
    };
    auto mfoff = [&](int r, int node) { return (static_cast<std::size_t>(r) * (n + 1) + node) * d; };

    Eigen::VectorXd xb(d), vb(m), sum(d), loo(d), drift(d), diffw(d), diffw0(d);

    for (int r = 0; r < replications; ++r) {
        for (int i = 0; i < N; ++i)
            Eigen::Map<Eigen::VectorXd>(b.X.data() + xoff(r, i, 0), d) = noise.initial(r, i);
        Eigen::Map<Eigen::VectorXd>(b.Xbar_mf.data() + mfoff(r, 0), d) = noise.init_mean;

        for (int j = 0; j <= n; ++j) {
            const double s = cs.grid.node(j);
            const CoefficientValues& c = cv[j];
            xb = Eigen::Map<const Eigen::VectorXd>(b.Xbar_mf.data() + mfoff(r, j), d);

            sum.setZero();
            for (int i = 0; i < N; ++i)
                sum += Eigen::Map<const Eigen::VectorXd>(b.X.data() + xoff(r, i, j), d);

            for (int i = 0; i < N; ++i) {
                Eigen::Map<const Eigen::VectorXd> xi(b.X.data() + xoff(r, i, j), d);
                Eigen::Map<Eigen::VectorXd> vi(b.V.data() + voff(r, i, j), m);
                if (deviation && i == deviator) {
                    loo = (sum - xi) / (N - 1.0);
                    (*deviation)(xi, xb, loo, s, j, vi);
                } else {
                    vi.noalias() = -(gs.K0[j] * (xi - xb));
                    vi.noalias() -= gs.K1[j] * xb;
                    vi -= gs.c[j];
                }
            }

            if (j == n) break;

            const double dw0 = noise.common_increment(r, j);
            for (int i = 0; i < N; ++i) {
                Eigen::Map<const Eigen::VectorXd> xi(b.X.data() + xoff(r, i, j), d);
                Eigen::Map<const Eigen::VectorXd> vi(b.V.data() + voff(r, i, j), m);
                const double dw = noise.increment(r, i, j);
                drift.noalias() = c.A * xi;
                drift.noalias() += c.B * vi;
                diffw.noalias() = c.C * xi;
                diffw.noalias() += c.D * vi;
                diffw0.noalias() = c.F * xi;
                diffw0.noalias() += c.G * vi;
                Eigen::Map<Eigen::VectorXd> xn(b.X.data() + xoff(r, i, j + 1), d);
                xn = xi + dt * drift + dw * diffw + dw0 * diffw0;
                if (!xn.allFinite())
                    throw DivergenceError("simulate_game: non-finite state at node " +
                                              std::to_string(j + 1),
                                          j + 1);
            }

            // Mean-field reference path against the common noise.
            vb = mean_control_node(gs, j, xb);
            drift.noalias() = (c.A + c.Abar) * xb;
            drift.noalias() += (c.B + c.Bbar) * vb;
            diffw0.noalias() = (c.F + c.Fbar) * xb;
            diffw0.noalias() += (c.G + c.Gbar) * vb;
            Eigen::Map<Eigen::VectorXd>(b.Xbar_mf.data() + mfoff(r, j + 1), d) =
                xb + dt * drift + dw0 * diffw0;
        }
    }
    return b;
}

std::vector<double> player_cost_paths(const GameBatch& b, const CoefficientSet& cs, int i) {
    if (i < 0 || i >= b.N) throw RangeError("player_cost: player index out of range");
    const int n = cs.grid.n_steps;
    const double dt = cs.grid.dt();
    const double denom = b.N - 1.0;

    std::vector<CoefficientValues> cv;
    cv.reserve(n + 1);
    for (int j = 0; j <= n; ++j) cv.push_back(cs.at_node(j));

    std::vector<double> out(b.R, 0.0);
    Eigen::VectorXd xi(b.d), vi(b.m), xsum(b.d), vsum(b.m), xloo(b.d), vloo(b.m);
    for (int r = 0; r < b.R; ++r) {
        double J = 0.0;
        for (int j = 0; j <= n; ++j) {
            const CoefficientValues& c = cv[j];
            xi = b.state(r, i, j);
            vi = b.control(r, i, j);
            xsum.setZero();
            vsum.setZero();
            for (int p = 0; p < b.N; ++p) {
                xsum += b.state(r, p, j);
                vsum += b.control(r, p, j);
            }
            xloo = (xsum - xi) / denom;
            vloo = (vsum - vi) / denom;
            const double w = (j == 0 || j == n) ? 0.5 * dt : dt;
            J += w * (xi.dot(c.Q * xi) + 2.0 * xi.dot(c.Qbar * xloo) + vi.dot(c.R * vi) +
                      2.0 * vi.dot(c.Rbar * vloo) + 2.0 * vi.dot(c.S * xi) +
                      2.0 * vi.dot(c.Sbar * xloo) + 2.0 * vloo.dot(c.Sbar * xi) +
                      2.0 * c.q.dot(xi) + 2.0 * c.r.dot(vi));
        }
        xi = b.state(r, i, n);
        xsum.setZero();
        for (int p = 0; p < b.N; ++p) xsum += b.state(r, p, n);
        xloo = (xsum - xi) / denom;
        J += xi.dot(cs.H * xi) + 2.0 * xi.dot(cs.Hbar * xloo);
        out[r] = J;
    }
    return out;
}

std::pair<double, double> player_cost(const GameBatch& b, const CoefficientSet& cs, int i) {
    const std::vector<double> J = player_cost_paths(b, cs, i);
    double mean = 0.0;
    for (double x : J) mean += x;
    mean /= J.size();
    double var = 0.0;
    for (double x : J) var += (x - mean) * (x - mean);
    const double se = J.size() > 1 ? std::sqrt(var / (J.size() - 1.0) / J.size()) : 0.0;
    return {mean, se};
}

DeviationReport deviation_gain(const CoefficientSet& cs, const GainSchedule& gs,
                               const RiccatiSolution& rs, int N, int player,
                               CandidateFamily family, std::uint64_t seed, int replications,
                               const InitSpec& init, const std::vector<double>& scale_grid,
                               const std::vector<double>& shift_grid) {
    struct Candidate {
        std::string label;
        GamePolicy policy;
    };
    std::vector<Candidate> candidates;

    auto add_scaled = [&] {
        for (double cscale : scale_grid)
            candidates.push_back(
                {"scaled c=" + std::to_string(cscale),
                 [g = &gs, cscale](const Eigen::Ref<const Eigen::VectorXd>& X,
                                   const Eigen::Ref<const Eigen::VectorXd>& mf,
                                   const Eigen::Ref<const Eigen::VectorXd>& /*loo*/, double /*s*/,
                                   int node, Eigen::Ref<Eigen::VectorXd> out) {
                     out.noalias() = -(g->K0[node] * (X - mf));
                     out.noalias() -= g->K1[node] * mf;
                     out -= g->c[node];
                     out *= cscale;
                 }});
    };
    auto add_loo = [&] {
        candidates.push_back(
            {"loo-refit", [g = &gs](const Eigen::Ref<const Eigen::VectorXd>& X,
                                    const Eigen::Ref<const Eigen::VectorXd>& /*mf*/,
                                    const Eigen::Ref<const Eigen::VectorXd>& loo, double /*s*/,
                                    int node, Eigen::Ref<Eigen::VectorXd> out) {
                 out.noalias() = -(g->K0[node] * (X - loo));
                 out.noalias() -= g->K1[node] * loo;
                 out -= g->c[node];
             }});
    };
    auto add_shift = [&] {
        for (double theta : shift_grid)
            candidates.push_back(
                {"shift theta=" + std::to_string(theta),
                 [g = &gs, theta](const Eigen::Ref<const Eigen::VectorXd>& X,
                                  const Eigen::Ref<const Eigen::VectorXd>& mf,
                                  const Eigen::Ref<const Eigen::VectorXd>& /*loo*/, double /*s*/,
                                  int node, Eigen::Ref<Eigen::VectorXd> out) {
                     out.noalias() = -(g->K0[node] * (X - mf));
                     out.noalias() -= g->K1[node] * mf;
                     out -= g->c[node];
                     out.array() += theta;
                 }});
    };
    switch (family) {
        case CandidateFamily::Scaled: add_scaled(); break;
        case CandidateFamily::LeaveOneOut: add_loo(); break;
        case CandidateFamily::Shift: add_shift(); break;
        case CandidateFamily::All: add_scaled(); add_loo(); add_shift(); break;
    }

    const GameBatch base = simulate_game(cs, gs, rs, N, seed, replications, init);
    const std::vector<double> base_costs = player_cost_paths(base, cs, player);

    // Common random numbers: all candidates rerun on the same seed, so the
    // non-deviating players' paths are identical across candidates.
    std::vector<double> best_costs = base_costs;
    double best_mean = 0.0;
    for (double x : base_costs) best_mean += x;
    best_mean /= base_costs.size();
    std::string best_label = "equilibrium";

    for (const auto& cand : candidates) {
        const GameBatch gb =
            simulate_game(cs, gs, rs, N, seed, replications, init, player, &cand.policy);
        const std::vector<double> costs = player_cost_paths(gb, cs, player);
        double mean = 0.0;
        for (double x : costs) mean += x;
        mean /= costs.size();
        if (mean < best_mean) {
            best_mean = mean;
            best_costs = costs;
            best_label = cand.label;
        }
    }

    DeviationReport rep;
    rep.N = N;
    rep.player = player;
    rep.family = family;
    rep.best_candidate = best_label;
    std::vector<double> diff(base_costs.size());
    for (std::size_t r = 0; r < diff.size(); ++r) diff[r] = base_costs[r] - best_costs[r];
    double mean = 0.0;
    for (double x : diff) mean += x;
    mean /= diff.size();
    double var = 0.0;
    for (double x : diff) var += (x - mean) * (x - mean);
    rep.gain = mean;
    rep.se = diff.size() > 1 ? std::sqrt(var / (diff.size() - 1.0) / diff.size()) : 0.0;
    return rep;
}

}  // namespace mflq
