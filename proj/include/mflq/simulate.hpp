#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "mflq/feedback.hpp"
#include "mflq/model.hpp"
#include "mflq/noise.hpp"
#include "mflq/riccati.hpp"

namespace mflq {

/// How the conditional mean entering drift, diffusion and control is obtained:
/// the empirical average over the particles of a common path, or the
/// autonomous mean process integrated against the common noise alone.
enum class MeanMode { Estimated, Exact };

const char* to_string(MeanMode m);

/// Adapted control law (X, Xbar, s, node) -> v, writing into `out`.
using Policy = std::function<void(const Eigen::Ref<const Eigen::VectorXd>& X,
                                  const Eigen::Ref<const Eigen::VectorXd>& Xbar, double s, int node,
                                  Eigen::Ref<Eigen::VectorXd> out)>;

/// The optimal feedback law as a Policy. The schedule must outlive the policy.
Policy optimal_policy(const GainSchedule& gs);

/// base + h * direction, sharing argument evaluation.
Policy perturbed_policy(Policy base, Policy direction, double h);

/// Particle trajectories of the controlled dynamics under shared common-noise
/// paths, with controls and conditional-mean fields per node.
struct EnsembleBatch {
    TimeGrid grid;
    int K = 0, M = 0, d = 0, m = 0;
    MeanMode mode = MeanMode::Estimated;
    std::vector<double> X;     // states   [((k M + i)(n+1) + node) d + comp]
    std::vector<double> V;     // controls [((k M + i)(n+1) + node) m + comp]
    std::vector<double> Xbar;  // mean states   [(k (n+1) + node) d + comp]
    std::vector<double> Vbar;  // mean controls [(k (n+1) + node) m + comp]

    Eigen::Map<const Eigen::VectorXd> state(int k, int i, int node) const {
        return {X.data() + (((static_cast<std::size_t>(k) * M + i) * (grid.n_steps + 1)) + node) * d,
                d};
    }
    Eigen::Map<const Eigen::VectorXd> control(int k, int i, int node) const {
        return {V.data() + (((static_cast<std::size_t>(k) * M + i) * (grid.n_steps + 1)) + node) * m,
                m};
    }
    Eigen::Map<const Eigen::VectorXd> mean_state(int k, int node) const {
        return {Xbar.data() + (static_cast<std::size_t>(k) * (grid.n_steps + 1) + node) * d, d};
    }
    Eigen::Map<const Eigen::VectorXd> mean_control(int k, int node) const {
        return {Vbar.data() + (static_cast<std::size_t>(k) * (grid.n_steps + 1) + node) * m, m};
    }
};

/// Explicit first-order stepping of the controlled dynamics with the optimal
/// feedback, or with `override_policy` when given. In estimated mode the mean
/// fields are per-path particle averages refreshed every node; in exact mode
/// the mean state is integrated as its own process against the common noise
/// with the optimal mean law and broadcast to the particles.
EnsembleBatch simulate_ensemble(const CoefficientSet& cs, const GainSchedule& gs,
                                const RiccatiSolution& rs, const NoiseBundle& noise, MeanMode mode,
                                const Policy* override_policy = nullptr);

/// Monte Carlo cost estimates; running terms by trapezoid rule on the grid,
/// standard errors across common paths.
struct CostReport {
    double j_lq = 0.0, se_lq = 0.0;
    double j_mfg = 0.0, se_mfg = 0.0;
    double poa = 0.0, se_poa = 0.0;  // j_mfg - j_lq, paired per common path
    std::string quadrature = "trapezoid";
    std::vector<double> per_path_lq, per_path_mfg;
};

CostReport evaluate_costs(const EnsembleBatch& batch, const CoefficientSet& cs);

}  // namespace mflq
