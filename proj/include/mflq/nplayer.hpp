#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mflq/noise.hpp"
#include "mflq/riccati.hpp"
#include "mflq/simulate.hpp"

namespace mflq {

/// Deviation law for one player: sees its own state, the mean-field reference
/// path and the live leave-one-out average of the other players.
using GamePolicy = std::function<void(const Eigen::Ref<const Eigen::VectorXd>& X,
                                      const Eigen::Ref<const Eigen::VectorXd>& mean_field,
                                      const Eigen::Ref<const Eigen::VectorXd>& leave_one_out,
                                      double s, int node, Eigen::Ref<Eigen::VectorXd> out)>;

/// R independent realizations of the finite game: N players sharing a common
/// noise path per realization, each carrying its own idiosyncratic noise.
struct GameBatch {
    TimeGrid grid;
    int R = 0, N = 0, d = 0, m = 0;
    int deviator = -1;
    std::vector<double> X, V;       // [((r N + i)(n+1) + node) dim + comp]
    std::vector<double> Xbar_mf;    // mean-field reference path [(r (n+1) + node) d + comp]

    Eigen::Map<const Eigen::VectorXd> state(int r, int i, int node) const {
        return {X.data() + (((static_cast<std::size_t>(r) * N + i) * (grid.n_steps + 1)) + node) * d,
                d};
    }
    Eigen::Map<const Eigen::VectorXd> control(int r, int i, int node) const {
        return {V.data() + (((static_cast<std::size_t>(r) * N + i) * (grid.n_steps + 1)) + node) * m,
                m};
    }
    Eigen::Map<const Eigen::VectorXd> mean_field(int r, int node) const {
        return {Xbar_mf.data() + (static_cast<std::size_t>(r) * (grid.n_steps + 1) + node) * d, d};
    }
};

/// Simulates the game under the reducible coefficient regime (uncoupled
/// dynamics, interaction through costs only). Non-deviating players apply the
/// mean-field feedback with the conditional mean replaced by the exact mean
/// process of their own mean-field problem; an optional deviator applies
/// `deviation` instead. Requires is_mfg_reducible(cs) and N >= 2.
GameBatch simulate_game(const CoefficientSet& cs, const GainSchedule& gs,
                        const RiccatiSolution& rs, int N, std::uint64_t seed, int replications,
                        const InitSpec& init, int deviator = -1,
                        const GamePolicy* deviation = nullptr);

/// Cost of player i averaged over realizations, with its standard error.
/// Trapezoid rule in time, leave-one-out averages in the interaction terms.
std::pair<double, double> player_cost(const GameBatch& batch, const CoefficientSet& cs, int i);

/// Per-realization costs of player i (one entry per realization).
std::vector<double> player_cost_paths(const GameBatch& batch, const CoefficientSet& cs, int i);

enum class CandidateFamily { Scaled, LeaveOneOut, Shift, All };

const char* to_string(CandidateFamily f);

struct DeviationReport {
    int N = 0;
    int player = 0;
    CandidateFamily family = CandidateFamily::All;
    double gain = 0.0;  // cost(v*) - best candidate cost; > 0 when deviating helps
    double se = 0.0;    // standard error of the paired difference
    std::string best_candidate;
};

/// Best improvement player i can obtain from a structured candidate family,
/// holding everyone else at the mean-field strategy, with common random
/// numbers across candidates. Families: scaled laws c v*, the law refit on the
/// live leave-one-out average, and constant shifts v* + theta.
DeviationReport deviation_gain(const CoefficientSet& cs, const GainSchedule& gs,
                               const RiccatiSolution& rs, int N, int player,
                               CandidateFamily family, std::uint64_t seed, int replications,
                               const InitSpec& init,
                               const std::vector<double>& scale_grid = {0.6, 0.8, 0.9, 1.0, 1.1,
                                                                        1.2, 1.4},
                               const std::vector<double>& shift_grid = {-0.2, -0.1, -0.05, 0.05,
                                                                        0.1, 0.2});

}  // namespace mflq
