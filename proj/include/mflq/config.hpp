#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mflq/exhaustible.hpp"
#include "mflq/model.hpp"
#include "mflq/noise.hpp"
#include "mflq/riccati.hpp"
#include "mflq/simulate.hpp"

namespace mflq {

/// Fully validated scenario description: one model (exhaustible preset or
/// explicit coefficients), a grid, simulation sizes, run options and output
/// destinations.
struct ScenarioConfig {
    // model
    bool use_exhaustible = true;
    double ex_mu = 0.0, ex_nu = 0.0, ex_nu0 = 0.0;
    bool ex_from_epsilon = true;
    double ex_epsilon = 0.0, ex_gamma = 1.0, ex_delta = 0.0;
    CoefficientSet explicit_model;  // populated when !use_exhaustible

    TimeGrid grid{0.0, 1.0, 2};

    // simulation
    std::uint64_t seed = 0;
    int paths = 1;      // common-noise paths K
    int particles = 1;  // particles per path M
    MeanMode mode = MeanMode::Estimated;
    InitSpec init;

    // run options
    PhiConvention phi_convention = PhiConvention::TerminalZero;
    std::vector<double> epsilon_sweep{0.0, 1.0, 2.0, 5.0, 10.0};
    std::vector<int> n_sweep{4, 16, 64, 256};
    int deviation_replications = 48;
    std::vector<double> gateaux_h{0.05, 0.1, 0.15, 0.2};
    int trajectory_particles = 4;  // per-path particle count exported to CSV

    // output
    std::string out_dir = "out";
    std::vector<std::string> formats{"csv"};

    /// Exhaustible parameters assembled from the model, grid and init sections.
    ExhaustibleParams exhaustible_params() const;

    /// Coefficients of the configured model on the configured grid.
    CoefficientSet build_model() const;

    /// Canonical serialization; parsing it back yields an equal config.
    nlohmann::json to_json() const;
};

/// Parses and validates a config file. Unknown keys are hard errors; all
/// schema problems are collected into the ConfigError's issue list.
ScenarioConfig parse_config(const std::string& path);

/// Same, from an already-parsed JSON document.
ScenarioConfig parse_config_json(const nlohmann::json& j);

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

}  // namespace mflq
