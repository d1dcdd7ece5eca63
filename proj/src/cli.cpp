#include "mflq/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mflq/config.hpp"
#include "mflq/csv.hpp"
#include "mflq/errors.hpp"
#include "mflq/nplayer.hpp"
#include "mflq/verify.hpp"

namespace mflq::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitGeneric = 1;
constexpr int kExitConfig = 2;
constexpr int kExitAssumption = 3;
constexpr int kExitSingularity = 4;
constexpr int kExitVerification = 5;

/// Tracks files created by one run so a failure leaves no partial outputs.
class RunDir {
public:
    explicit RunDir(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

    std::string path(const std::string& name) {
        const std::string p = (dir_ / name).string();
        created_.push_back(p);
        return p;
    }

    void discard_outputs() {
        for (const auto& p : created_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }

private:
    fs::path dir_;
    std::vector<std::string> created_;
};

struct Overrides {
    std::string out;
    std::int64_t seed = -1;
    int steps = 0, particles = 0, paths = 0;
    std::string phi;
};

ScenarioConfig load(const std::string& config_path, const Overrides& o) {
    ScenarioConfig cfg = parse_config(config_path);
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
    if (o.steps > 0) {
        if (!cfg.use_exhaustible)
            throw ConfigError("--steps override requires an exhaustible model",
                              {"--steps: explicit models carry grid-bound coefficient tables"});
        cfg.grid = TimeGrid(cfg.grid.t0, cfg.grid.T, o.steps);
    }
    if (o.particles > 0) cfg.particles = o.particles;
    if (o.paths > 0) cfg.paths = o.paths;
    if (!o.phi.empty()) {
        if (o.phi == "terminal-zero") cfg.phi_convention = PhiConvention::TerminalZero;
        else if (o.phi == "paper-forward-integral")
            cfg.phi_convention = PhiConvention::PaperForwardIntegral;
        else
            throw ConfigError("unknown --phi-convention value",
                              {"--phi-convention: one of terminal-zero | paper-forward-integral"});
    }
    return cfg;
}

std::string meta_line(const ScenarioConfig& cfg, const std::string& subcommand) {
    return "subcommand=" + subcommand + " seed=" + std::to_string(cfg.seed) + " grid=[" +
           CsvWriter::format(cfg.grid.t0) + "," + CsvWriter::format(cfg.grid.T) + "," +
           std::to_string(cfg.grid.n_steps) + "]";
}

void write_resolved_config(RunDir& dir, const ScenarioConfig& cfg) {
    std::ofstream out(dir.path("resolved_config.json"));
    out << cfg.to_json().dump(2) << "\n";
}

void append_matrix_columns(std::vector<std::string>& cols, const std::string& prefix, int rows,
                           int columns) {
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < columns; ++c)
            cols.push_back(prefix + "_" + std::to_string(r) + std::to_string(c));
}

int run_validate(const ScenarioConfig& cfg, RunDir& dir) {
    write_resolved_config(dir, cfg);
    const CoefficientSet cs = cfg.build_model();
    const AssumptionReport rep = validate_assumptions(cs);

    std::ofstream out(dir.path("assumption_report.txt"));
    out << "check=delta1 value=" << CsvWriter::format(rep.delta1) << " threshold=>=0 status="
        << (rep.q_ok ? "pass" : "fail") << "\n";
    out << "check=delta2 value=" << CsvWriter::format(rep.delta2) << " threshold=>0 status="
        << (rep.r_ok ? "pass" : "fail") << "\n";
    out << "check=terminal_weights value=" << (rep.h_ok ? 1.0 : 0.0)
        << " threshold=psd status=" << (rep.h_ok ? "pass" : "fail") << "\n";
    out << "check=cross_term_norm value=" << CsvWriter::format(rep.s_norm_sq)
        << " threshold=<delta1*delta2 status=" << (rep.s_ok ? "pass" : "fail") << "\n";
    for (const auto& v : rep.violations)
        out << "violation=\"" << v.check << "\" node=" << v.node
            << " margin=" << CsvWriter::format(v.margin) << "\n";
    out << "overall=" << (rep.passed() ? "pass" : "fail") << "\n";

    SummaryWriter sum(dir.path("summary.txt"));
    sum.kv("subcommand", std::string("validate"));
    sum.kv("delta1", rep.delta1);
    sum.kv("delta2", rep.delta2);
    sum.kv("passed", std::string(rep.passed() ? "true" : "false"));
    return rep.passed() ? kExitOk : kExitAssumption;
}

int run_solve(const ScenarioConfig& cfg, RunDir& dir) {
    write_resolved_config(dir, cfg);
    const CoefficientSet cs = cfg.build_model();
    const RiccatiSolution rs = solve_riccati(cs, cfg.phi_convention);
    const GainSchedule gs = compute_gains(cs, rs);

    std::vector<std::string> cols{"s"};
    append_matrix_columns(cols, "P", cs.d, cs.d);
    append_matrix_columns(cols, "Pi", cs.d, cs.d);
    for (int r = 0; r < cs.d; ++r) cols.push_back("phi_" + std::to_string(r));
    append_matrix_columns(cols, "Sigma0", cs.m, cs.m);
    append_matrix_columns(cols, "Sigma1", cs.m, cs.m);

    CsvWriter csv(dir.path("riccati.csv"), meta_line(cfg, "solve"), cols);
    std::vector<double> row;
    for (int k = 0; k <= cs.grid.n_steps; ++k) {
        row.clear();
        row.push_back(cs.grid.node(k));
        auto push_mat = [&](const Eigen::MatrixXd& M) {
            for (Eigen::Index r = 0; r < M.rows(); ++r)
                for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        };
        push_mat(rs.P[k]);
        push_mat(rs.Pi[k]);
        for (int r = 0; r < cs.d; ++r) row.push_back(rs.phi(k)[r]);
        push_mat(gs.Sigma0[k]);
        push_mat(gs.Sigma1[k]);
        csv.row(row);
    }
    csv.close();

    SummaryWriter sum(dir.path("summary.txt"));
    sum.kv("subcommand", std::string("solve"));
    sum.kv("phi_convention", std::string(to_string(cfg.phi_convention)));
    sum.kv("nodes", static_cast<long long>(cs.grid.n_steps + 1));
    sum.kv("P_terminal_00", rs.P.back()(0, 0));
    sum.kv("P_initial_00", rs.P.front()(0, 0));
    return kExitOk;
}

struct Pipeline {
    CoefficientSet cs;
    RiccatiSolution rs;
    GainSchedule gs;
    NoiseBundle noise;
    EnsembleBatch batch;
};

Pipeline run_pipeline(const ScenarioConfig& cfg) {
    Pipeline p;
    p.cs = cfg.build_model();
    p.rs = solve_riccati(p.cs, cfg.phi_convention);
    p.gs = compute_gains(p.cs, p.rs);
    p.noise = generate_noise(cfg.grid, cfg.seed, cfg.paths, cfg.particles, cfg.init);
    p.batch = simulate_ensemble(p.cs, p.gs, p.rs, p.noise, cfg.mode);
    return p;
}

void write_costs_csv(RunDir& dir, const ScenarioConfig& cfg, const std::string& name,
                     const CostReport& costs) {
    CsvWriter csv(dir.path(name), meta_line(cfg, "costs"), {"quantity", "estimate", "std_error"});
    csv.raw_row("j_lq," + CsvWriter::format(costs.j_lq) + "," + CsvWriter::format(costs.se_lq));
    csv.raw_row("j_mfg," + CsvWriter::format(costs.j_mfg) + "," + CsvWriter::format(costs.se_mfg));
    csv.raw_row("poa," + CsvWriter::format(costs.poa) + "," + CsvWriter::format(costs.se_poa));
    csv.close();
}

int run_simulate(const ScenarioConfig& cfg, RunDir& dir) {
    write_resolved_config(dir, cfg);
    Pipeline p = run_pipeline(cfg);

    std::vector<std::string> cols{"common_path", "particle", "step", "s"};
    for (int c = 0; c < p.cs.d; ++c) cols.push_back("x_" + std::to_string(c));
    for (int c = 0; c < p.cs.m; ++c) cols.push_back("v_" + std::to_string(c));
    for (int c = 0; c < p.cs.d; ++c) cols.push_back("xbar_" + std::to_string(c));
    CsvWriter traj(dir.path("trajectories.csv"), meta_line(cfg, "simulate"), cols);
    const int export_particles = std::min(cfg.trajectory_particles, cfg.particles);
    std::vector<double> row;
    for (int k = 0; k < p.batch.K; ++k)
        for (int i = 0; i < export_particles; ++i)
            for (int j = 0; j <= cfg.grid.n_steps; ++j) {
                row.clear();
                row.push_back(k);
                row.push_back(i);
                row.push_back(j);
                row.push_back(cfg.grid.node(j));
                const auto x = p.batch.state(k, i, j);
                for (int c = 0; c < p.cs.d; ++c) row.push_back(x[c]);
                const auto v = p.batch.control(k, i, j);
                for (int c = 0; c < p.cs.m; ++c) row.push_back(v[c]);
                const auto xb = p.batch.mean_state(k, j);
                for (int c = 0; c < p.cs.d; ++c) row.push_back(xb[c]);
                traj.row(row);
            }
    traj.close();

    const CostReport costs = evaluate_costs(p.batch, p.cs);
    write_costs_csv(dir, cfg, "costs.csv", costs);

    SummaryWriter sum(dir.path("summary.txt"));
    sum.kv("subcommand", std::string("simulate"));
    sum.kv("mode", std::string(to_string(cfg.mode)));
    sum.kv("paths", static_cast<long long>(cfg.paths));
    sum.kv("particles", static_cast<long long>(cfg.particles));
    sum.kv("j_lq", costs.j_lq);
    sum.kv("j_mfg", costs.j_mfg);
    sum.kv("poa", costs.poa);
    return kExitOk;
}

CoefficientSet regrid(const ScenarioConfig& cfg, int n_steps) {
    if (cfg.use_exhaustible) return to_coefficients(cfg.exhaustible_params(), n_steps);
    CoefficientSet cs = cfg.explicit_model;
    const CoefficientSchedule* scheds[] = {&cs.A, &cs.Abar, &cs.C, &cs.Cbar, &cs.F, &cs.Fbar,
                                           &cs.B, &cs.Bbar, &cs.D, &cs.Dbar, &cs.G, &cs.Gbar,
                                           &cs.Q, &cs.Qbar, &cs.R, &cs.Rbar, &cs.S, &cs.Sbar,
                                           &cs.S1bar, &cs.S2bar, &cs.q, &cs.qbar, &cs.r, &cs.rbar};
    for (const auto* s : scheds)
        if (s->rule() == CoefficientSchedule::Rule::Tabulated)
            throw UnsupportedError("verify: tabulated coefficients cannot be re-gridded");
    cs.grid = TimeGrid(cfg.grid.t0, cfg.grid.T, n_steps);
    return cs;
}

struct Check {
    std::string name;
    double value;
    std::string threshold;
    bool pass;
};

int run_verify(const ScenarioConfig& cfg, RunDir& dir) {
    write_resolved_config(dir, cfg);
    Pipeline p = run_pipeline(cfg);
    std::vector<Check> checks;

    // Stationarity relation along the simulated optimum: algebraic, so the
    // tolerance is rounding-level no matter the step size.
    const ResidualReport coupling = coupling_residual(p.batch, p.rs, p.gs, p.cs);
    checks.push_back({"coupling_rms", coupling.rms, "<=1e-9", coupling.rms <= 1e-9});

    // Backward-equation residual across a 8x resolution range, exact-mean
    // batches; the accumulated residual shrinks at first order.
    std::vector<double> dts, rmss;
    ResidualReport bsde_fine;
    bool slope_available = true;
    try {
        const int n = cfg.grid.n_steps;
        const int bsde_paths = std::min(cfg.paths, 16);
        const int bsde_particles = std::min(cfg.particles, 64);
        for (int div : {8, 4, 2, 1}) {
            const int steps = std::max(2, n / div);
            const CoefficientSet cs_r = regrid(cfg, steps);
            const RiccatiSolution rs_r = solve_riccati(cs_r, cfg.phi_convention);
            const GainSchedule gs_r = compute_gains(cs_r, rs_r);
            const NoiseBundle nz =
                generate_noise(cs_r.grid, cfg.seed, bsde_paths, bsde_particles, cfg.init);
            const EnsembleBatch eb = simulate_ensemble(cs_r, gs_r, rs_r, nz, MeanMode::Exact);
            const ResidualReport rr = bsde_residual(eb, nz, rs_r, gs_r, cs_r);
            dts.push_back(cs_r.grid.dt());
            rmss.push_back(rr.rms);
            if (div == 1) bsde_fine = rr;
        }
    } catch (const UnsupportedError&) {
        slope_available = false;
        const EnsembleBatch eb = simulate_ensemble(p.cs, p.gs, p.rs, p.noise, MeanMode::Exact);
        bsde_fine = bsde_residual(eb, p.noise, p.rs, p.gs, p.cs);
    }
    if (slope_available) {
        const double slope = convergence_slope(dts, rmss);
        checks.push_back({"bsde_order", slope, "[0.9,1.1]", slope >= 0.9 && slope <= 1.1});
    }
    checks.push_back({"bsde_terminal_mismatch", bsde_fine.terminal_mismatch, "<=1e-12",
                      bsde_fine.terminal_mismatch <= 1e-12});

    // Directional-derivative probes at the simulated policy.
    std::vector<std::pair<std::string, Policy>> directions;
    directions.emplace_back("constant", [](const Eigen::Ref<const Eigen::VectorXd>&,
                                           const Eigen::Ref<const Eigen::VectorXd>&, double, int,
                                           Eigen::Ref<Eigen::VectorXd> out) { out.setOnes(); });
    const double t0 = cfg.grid.t0, horizon = cfg.grid.horizon();
    directions.emplace_back(
        "time-sine", [t0, horizon](const Eigen::Ref<const Eigen::VectorXd>&,
                                   const Eigen::Ref<const Eigen::VectorXd>&, double s, int,
                                   Eigen::Ref<Eigen::VectorXd> out) {
            out.setConstant(std::sin(M_PI * (s - t0) / horizon));
        });
    directions.emplace_back(
        "state-linear", [](const Eigen::Ref<const Eigen::VectorXd>& X,
                           const Eigen::Ref<const Eigen::VectorXd>&, double, int,
                           Eigen::Ref<Eigen::VectorXd> out) {
            out.setConstant(X.sum());
        });
    const std::vector<GateauxRow> rows = gateaux_test(p.cs, p.gs, p.rs, directions, cfg.gateaux_h,
                                                      p.noise, MeanMode::Estimated);
    for (const auto& r : rows) {
        checks.push_back({"gateaux_slope(" + r.direction + ")", r.slope,
                          "|.|<=3se(" + CsvWriter::format(3.0 * r.slope_se) + ")",
                          std::abs(r.slope) <= 3.0 * r.slope_se});
        checks.push_back({"gateaux_curvature(" + r.direction + ")", r.curvature, ">0",
                          r.curvature > 0.0});
        checks.push_back({"gateaux_fit_r2(" + r.direction + ")", r.r2, ">=0.99", r.r2 >= 0.99});
    }

    std::ofstream rep(dir.path("verification_report.txt"));
    bool all_pass = true;
    for (const auto& c : checks) {
        rep << "check=" << c.name << " value=" << CsvWriter::format(c.value)
            << " threshold=" << c.threshold << " status=" << (c.pass ? "pass" : "fail") << "\n";
        all_pass = all_pass && c.pass;
    }
    rep << "overall=" << (all_pass ? "pass" : "fail") << "\n";
    rep.close();

    CsvWriter prof(dir.path("residual_profiles.csv"), meta_line(cfg, "verify"),
                   {"check", "node", "s", "value"});
    for (std::size_t j = 0; j < coupling.profile.size(); ++j)
        prof.raw_row("coupling," + std::to_string(j) + "," +
                     CsvWriter::format(cfg.grid.node(static_cast<int>(j))) + "," +
                     CsvWriter::format(coupling.profile[j]));
    for (std::size_t j = 0; j < bsde_fine.profile.size(); ++j)
        prof.raw_row("bsde," + std::to_string(j) + "," +
                     CsvWriter::format(cfg.grid.node(static_cast<int>(j))) + "," +
                     CsvWriter::format(bsde_fine.profile[j]));
    prof.close();

    SummaryWriter sum(dir.path("summary.txt"));
    sum.kv("subcommand", std::string("verify"));
    sum.kv("phi_convention", std::string(to_string(cfg.phi_convention)));
    sum.kv("coupling_rms", coupling.rms);
    sum.kv("bsde_terminal_mismatch", bsde_fine.terminal_mismatch);
    sum.kv("passed", std::string(all_pass ? "true" : "false"));
    return all_pass ? kExitOk : kExitVerification;
}

int run_nash_gap(const ScenarioConfig& cfg, RunDir& dir) {
    write_resolved_config(dir, cfg);
    const CoefficientSet cs = cfg.build_model();
    const RiccatiSolution rs = solve_riccati(cs, cfg.phi_convention);
    const GainSchedule gs = compute_gains(cs, rs);

    CsvWriter csv(dir.path("nash_gap.csv"), meta_line(cfg, "nash-gap"),
                  {"N", "family", "best_gain", "std_error"});
    for (int N : cfg.n_sweep) {
        for (CandidateFamily fam : {CandidateFamily::Scaled, CandidateFamily::LeaveOneOut,
                                    CandidateFamily::Shift, CandidateFamily::All}) {
            const DeviationReport rep = deviation_gain(cs, gs, rs, N, 0, fam, cfg.seed,
                                                       cfg.deviation_replications, cfg.init);
            csv.raw_row(std::to_string(N) + "," + to_string(fam) + "," +
                        CsvWriter::format(rep.gain) + "," + CsvWriter::format(rep.se));
        }
    }
    csv.close();

    SummaryWriter sum(dir.path("summary.txt"));
    sum.kv("subcommand", std::string("nash-gap"));
    sum.kv("replications", static_cast<long long>(cfg.deviation_replications));
    return kExitOk;
}

int run_exhaustible_sweep(const ScenarioConfig& cfg, RunDir& dir) {
    if (!cfg.use_exhaustible)
        throw ConfigError("exhaustible-sweep requires an exhaustible model",
                          {"model: expected the 'exhaustible' section"});
    write_resolved_config(dir, cfg);

    CsvWriter csv(dir.path("price_sweep.csv"), meta_line(cfg, "exhaustible-sweep"),
                  {"epsilon", "s", "expected_price", "std_error", "chi", "pi", "p"});
    const double mean_reserve = cfg.init.mean_value()[0];
    for (double eps : cfg.epsilon_sweep) {
        const ExhaustibleParams params = ExhaustibleParams::with_epsilon(
            cfg.ex_mu, cfg.ex_nu, cfg.ex_nu0, eps, cfg.grid.t0, cfg.grid.T, mean_reserve);
        const CoefficientSet cs = to_coefficients(params, cfg.grid.n_steps);
        const RiccatiSolution rs = solve_riccati(cs, cfg.phi_convention);
        const GainSchedule gs = compute_gains(cs, rs);
        const NoiseBundle noise =
            generate_noise(cfg.grid, cfg.seed, cfg.paths, cfg.particles, cfg.init);
        const EnsembleBatch batch = simulate_ensemble(cs, gs, rs, noise, cfg.mode);
        const PriceCurve pc = market_price_curve(params, batch);
        for (int j = 0; j <= cfg.grid.n_steps; ++j)
            csv.raw_row(CsvWriter::format(eps) + "," + CsvWriter::format(pc.s[j]) + "," +
                        CsvWriter::format(pc.expected_price[j]) + "," +
                        CsvWriter::format(pc.expected_price_se[j]) + "," +
                        CsvWriter::format(pc.chi[j]) + "," +
                        CsvWriter::format(rs.Pi[j](0, 0)) + "," +
                        CsvWriter::format(rs.P[j](0, 0)));
    }
    csv.close();

    SummaryWriter sum(dir.path("summary.txt"));
    sum.kv("subcommand", std::string("exhaustible-sweep"));
    sum.kv("sweep_points", static_cast<long long>(cfg.epsilon_sweep.size()));
    return kExitOk;
}

int run_poa(const ScenarioConfig& cfg, RunDir& dir) {
    write_resolved_config(dir, cfg);
    Pipeline p = run_pipeline(cfg);
    const CostReport costs = evaluate_costs(p.batch, p.cs);

    CsvWriter csv(dir.path("poa.csv"), meta_line(cfg, "poa"),
                  {"quantity", "estimate", "std_error"});
    csv.raw_row("j_lq," + CsvWriter::format(costs.j_lq) + "," + CsvWriter::format(costs.se_lq));
    csv.raw_row("j_mfg," + CsvWriter::format(costs.j_mfg) + "," + CsvWriter::format(costs.se_mfg));
    csv.raw_row("poa," + CsvWriter::format(costs.poa) + "," + CsvWriter::format(costs.se_poa));

    if (cfg.use_exhaustible) {
        // Competition identity: the anarchy gap equals (epsilon/2) of the
        // discounted squared mean production, path by path in expectation.
        const ExhaustibleParams params = cfg.exhaustible_params();
        const double half_eps = params.beta();
        std::vector<double> rhs(p.batch.K, 0.0);
        for (int k = 0; k < p.batch.K; ++k) {
            double acc = 0.0;
            for (int j = 0; j <= cfg.grid.n_steps; ++j) {
                const double w =
                    (j == 0 || j == cfg.grid.n_steps) ? 0.5 * cfg.grid.dt() : cfg.grid.dt();
                const double vbar = p.batch.mean_control(k, j)[0];
                acc += w * std::exp(-params.mu * (cfg.grid.node(j) - cfg.grid.t0)) * vbar * vbar;
            }
            rhs[k] = half_eps * acc;
        }
        double mean = 0.0;
        for (double x : rhs) mean += x;
        mean /= rhs.size();
        double var = 0.0;
        for (double x : rhs) var += (x - mean) * (x - mean);
        const double se = rhs.size() > 1 ? std::sqrt(var / (rhs.size() - 1.0) / rhs.size()) : 0.0;
        csv.raw_row("poa_identity_rhs," + CsvWriter::format(mean) + "," + CsvWriter::format(se));

        std::vector<double> diff(p.batch.K);
        for (int k = 0; k < p.batch.K; ++k)
            diff[k] = (costs.per_path_mfg[k] - costs.per_path_lq[k]) - rhs[k];
        double dmean = 0.0;
        for (double x : diff) dmean += x;
        dmean /= diff.size();
        double dvar = 0.0;
        for (double x : diff) dvar += (x - dmean) * (x - dmean);
        const double dse =
            diff.size() > 1 ? std::sqrt(dvar / (diff.size() - 1.0) / diff.size()) : 0.0;
        csv.raw_row("poa_minus_identity," + CsvWriter::format(dmean) + "," +
                    CsvWriter::format(dse));
    }
    csv.close();

    SummaryWriter sum(dir.path("summary.txt"));
    sum.kv("subcommand", std::string("poa"));
    sum.kv("j_lq", costs.j_lq);
    sum.kv("j_mfg", costs.j_mfg);
    sum.kv("poa", costs.poa);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Linear-quadratic mean-field control and games with common noise"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides overrides;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "scenario config file")->required();
        sub->add_option("--out", overrides.out, "output directory (overrides config)");
        sub->add_option("--seed", overrides.seed, "RNG seed (overrides config)");
        sub->add_option("--steps", overrides.steps, "grid steps (overrides config)");
        sub->add_option("--particles", overrides.particles, "particles per path");
        sub->add_option("--paths", overrides.paths, "common-noise paths");
        sub->add_option("--phi-convention", overrides.phi,
                        "terminal-zero | paper-forward-integral");
    };

    CLI::App* validate = app.add_subcommand("validate", "coefficient assumption report");
    CLI::App* solve = app.add_subcommand("solve", "backward Riccati pass and gain schedule");
    CLI::App* simulate = app.add_subcommand("simulate", "particle simulation and costs");
    CLI::App* verify = app.add_subcommand("verify", "optimality-system verification");
    CLI::App* nash = app.add_subcommand("nash-gap", "finite-game deviation sweep");
    CLI::App* sweep = app.add_subcommand("exhaustible-sweep", "competition sweep of market prices");
    CLI::App* poa = app.add_subcommand("poa", "price-of-anarchy table");
    for (CLI::App* sub : {validate, solve, simulate, verify, nash, sweep, poa}) add_common(sub);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const ScenarioConfig cfg = load(config_path, overrides);
        RunDir dir(cfg.out_dir);
        try {
            if (validate->parsed()) return run_validate(cfg, dir);
            if (solve->parsed()) return run_solve(cfg, dir);
            if (simulate->parsed()) return run_simulate(cfg, dir);
            if (verify->parsed()) return run_verify(cfg, dir);
            if (nash->parsed()) return run_nash_gap(cfg, dir);
            if (sweep->parsed()) return run_exhaustible_sweep(cfg, dir);
            if (poa->parsed()) return run_poa(cfg, dir);
            return kExitConfig;
        } catch (...) {
            dir.discard_outputs();
            throw;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        for (const auto& issue : e.issues) std::cerr << "  " << issue << "\n";
        return kExitConfig;
    } catch (const AssumptionError& e) {
        std::cerr << "assumption failure: " << e.what() << "\n";
        return kExitAssumption;
    } catch (const SingularityError& e) {
        std::cerr << "numerical singularity: " << e.what() << "\n";
        return kExitSingularity;
    } catch (const StructuralError& e) {
        std::cerr << "malformed model: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGeneric;
    }
}

}  // namespace mflq::cli
