#include "mflq/noise.hpp"

#include <cmath>

#include "mflq/errors.hpp"
#include "mflq/rng.hpp"

namespace mflq {

namespace {
// Stream ids keep the common noise, idiosyncratic noise and initial draws
// on disjoint counter ranges.
constexpr std::uint64_t kStreamCommon = 0;
constexpr std::uint64_t kStreamIdiosyncratic = 1;
constexpr std::uint64_t kStreamInitial = 2;
}  // namespace

InitSpec InitSpec::point(Eigen::VectorXd x0) {
    InitSpec s;
    s.kind = Kind::Point;
    s.dim = static_cast<int>(x0.size());
    s.mean = std::move(x0);
    s.validate();
    return s;
}

InitSpec InitSpec::normal(Eigen::VectorXd mean, double var, bool truncated_at_zero) {
    InitSpec s;
    s.kind = Kind::Normal;
    s.dim = static_cast<int>(mean.size());
    s.mean = std::move(mean);
    s.var = var;
    s.truncated = truncated_at_zero;
    s.validate();
    return s;
}

InitSpec InitSpec::lognormal(double mean_log, double sd_log, int dim) {
    InitSpec s;
    s.kind = Kind::LogNormal;
    s.dim = dim;
    s.mlog = mean_log;
    s.slog = sd_log;
    s.mean = Eigen::VectorXd::Zero(dim);
    s.validate();
    return s;
}

void InitSpec::validate() const {
    if (dim < 1) throw StructuralError("InitSpec: dimension must be positive");
    switch (kind) {
        case Kind::Point:
            break;
        case Kind::Normal:
            if (!(var >= 0.0) || !std::isfinite(var))
                throw StructuralError("InitSpec: normal variance must be finite and >= 0");
            break;
        case Kind::LogNormal:
            if (!(slog > 0.0) || !std::isfinite(slog) || !std::isfinite(mlog))
                throw StructuralError("InitSpec: lognormal needs finite mean-log and sd-log > 0");
            break;
    }
}

Eigen::VectorXd InitSpec::mean_value() const {
    switch (kind) {
        case Kind::Point:
            return mean;
        case Kind::Normal: {
            if (!truncated || var == 0.0) return mean;
            Eigen::VectorXd out(dim);
            const double sd = std::sqrt(var);
            for (int c = 0; c < dim; ++c) {
                const double a = -mean[c] / sd;
                const double phi = std::exp(-0.5 * a * a) / std::sqrt(2.0 * M_PI);
                const double tail = 1.0 - rng::normal_cdf(a);
                out[c] = mean[c] + sd * phi / tail;
            }
            return out;
        }
        case Kind::LogNormal:
            return Eigen::VectorXd::Constant(dim, std::exp(mlog + 0.5 * slog * slog));
    }
    throw StructuralError("InitSpec: corrupt kind");
}

Eigen::VectorXd InitSpec::draw(std::uint64_t seed, int path, int particle) const {
    Eigen::VectorXd out(dim);
    for (int c = 0; c < dim; ++c) {
        switch (kind) {
            case Kind::Point:
                out[c] = mean[c];
                break;
            case Kind::Normal: {
                const double sd = std::sqrt(var);
                if (!truncated) {
                    out[c] = mean[c] + sd * rng::normal(seed, kStreamInitial, path, particle, c);
                } else if (sd == 0.0) {
                    out[c] = mean[c];
                } else {
                    // Inverse-CDF sampling of the law conditioned on positivity:
                    // one uniform per component, no rejection loop.
                    const double lo = rng::normal_cdf(-mean[c] / sd);
                    const double u = rng::uniform(seed, kStreamInitial, path, particle, c);
                    out[c] = mean[c] + sd * rng::inverse_normal_cdf(lo + u * (1.0 - lo));
                }
                break;
            }
            case Kind::LogNormal:
                out[c] = std::exp(mlog + slog * rng::normal(seed, kStreamInitial, path, particle, c));
                break;
        }
    }
    return out;
}

NoiseBundle generate_noise(const TimeGrid& grid, std::uint64_t seed, int K, int M,
                           const InitSpec& init) {
    if (K < 1 || M < 1) throw StructuralError("generate_noise: K and M must be >= 1");
    init.validate();
    NoiseBundle nb;
    nb.grid = grid;
    nb.seed = seed;
    nb.K = K;
    nb.M = M;
    const int n = grid.n_steps;
    const double sdt = std::sqrt(grid.dt());

    nb.dW0.resize(static_cast<std::size_t>(K) * n);
    for (int k = 0; k < K; ++k)
        for (int s = 0; s < n; ++s)
            nb.dW0[static_cast<std::size_t>(k) * n + s] =
                sdt * rng::normal(seed, kStreamCommon, k, 0, s);

    nb.dW.resize(static_cast<std::size_t>(K) * M * n);
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < M; ++i)
            for (int s = 0; s < n; ++s)
                nb.dW[(static_cast<std::size_t>(k) * M + i) * n + s] =
                    sdt * rng::normal(seed, kStreamIdiosyncratic, k, i, s);

    nb.x0.reserve(static_cast<std::size_t>(K) * M);
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < M; ++i) nb.x0.push_back(init.draw(seed, k, i));
    nb.init_mean = init.mean_value();
    return nb;
}

}  // namespace mflq
