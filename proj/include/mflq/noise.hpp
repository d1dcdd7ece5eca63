#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mflq/grid.hpp"

namespace mflq {

/// Initial-state distribution. Components are drawn independently; the
/// normal family optionally conditions on positivity (truncation at 0).
struct InitSpec {
    enum class Kind { Point, Normal, LogNormal };
    Kind kind = Kind::Point;
    Eigen::VectorXd mean;   // point value / normal mean (per component)
    double var = 0.0;       // normal variance (shared across components)
    bool truncated = false; // normal only
    double mlog = 0.0;      // lognormal: mean of log
    double slog = 1.0;      // lognormal: sd of log
    int dim = 1;

    static InitSpec point(Eigen::VectorXd x0);
    static InitSpec normal(Eigen::VectorXd mean, double var, bool truncated_at_zero = false);
    static InitSpec lognormal(double mean_log, double sd_log, int dim = 1);

    /// Expectation of a draw.
    Eigen::VectorXd mean_value() const;

    /// Draw addressed by (seed, path, particle); independent of the increments.
    Eigen::VectorXd draw(std::uint64_t seed, int path, int particle) const;

    void validate() const;
};

/// Brownian increments and initial states for K common paths with M particles
/// each. Every entry is reproducible from (seed, path, particle, step) alone.
struct NoiseBundle {
    TimeGrid grid;
    std::uint64_t seed = 0;
    int K = 1;  // common-noise paths
    int M = 1;  // particles per common path
    std::vector<double> dW0;              // [k * n_steps + step]
    std::vector<double> dW;               // [(k * M + i) * n_steps + step]
    std::vector<Eigen::VectorXd> x0;      // [k * M + i]
    Eigen::VectorXd init_mean;            // expectation of the initial law

    double common_increment(int k, int step) const { return dW0[static_cast<std::size_t>(k) * grid.n_steps + step]; }
    double increment(int k, int i, int step) const {
        return dW[(static_cast<std::size_t>(k) * M + i) * grid.n_steps + step];
    }
    const Eigen::VectorXd& initial(int k, int i) const { return x0[static_cast<std::size_t>(k) * M + i]; }
};

/// Deterministic given its arguments: increments are Normal(0, dt) drawn from
/// dedicated counter streams, initial states from an independent stream.
NoiseBundle generate_noise(const TimeGrid& grid, std::uint64_t seed, int K, int M,
                           const InitSpec& init);

}  // namespace mflq
