#include "mflq/config.hpp"

#include <fstream>
#include <set>

#include "mflq/errors.hpp"

namespace mflq {

namespace {

using nlohmann::json;

struct Issues {
    std::vector<std::string> list;
    void add(const std::string& path, const std::string& what) { list.push_back(path + ": " + what); }
    void raise_if_any() const {
        if (!list.empty()) throw ConfigError("config schema errors", list);
    }
};

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed,
                Issues& issues) {
    if (!j.is_object()) {
        issues.add(path, "expected an object");
        return;
    }
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) issues.add(path + "." + it.key(), "unknown key");
}

double get_num(const json& j, const std::string& path, const std::string& key, Issues& issues,
               double fallback, bool required = false) {
    if (!j.contains(key)) {
        if (required) issues.add(path + "." + key, "missing required key");
        return fallback;
    }
    if (!j.at(key).is_number()) {
        issues.add(path + "." + key, "expected a number");
        return fallback;
    }
    return j.at(key).get<double>();
}

Eigen::MatrixXd parse_matrix(const json& j, const std::string& path, Issues& issues) {
    if (!j.is_array() || j.empty()) {
        issues.add(path, "expected a non-empty array");
        return Eigen::MatrixXd::Zero(1, 1);
    }
    // Flat numeric array reads as a column vector.
    if (j.front().is_number()) {
        Eigen::MatrixXd M(j.size(), 1);
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_number()) {
                issues.add(path, "expected numbers");
                return Eigen::MatrixXd::Zero(1, 1);
            }
            M(static_cast<Eigen::Index>(i), 0) = j[i].get<double>();
        }
        return M;
    }
    const std::size_t rows = j.size();
    if (!j.front().is_array() || j.front().empty()) {
        issues.add(path, "expected rows of numbers");
        return Eigen::MatrixXd::Zero(1, 1);
    }
    const std::size_t cols = j.front().size();
    Eigen::MatrixXd M(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) {
            issues.add(path, "ragged matrix rows");
            return Eigen::MatrixXd::Zero(1, 1);
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number()) {
                issues.add(path, "expected numbers");
                return Eigen::MatrixXd::Zero(1, 1);
            }
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
        }
    }
    return M;
}

json matrix_to_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        rows.push_back(row);
    }
    return rows;
}

CoefficientSchedule parse_schedule(const json& j, const std::string& path, Issues& issues,
                                   Eigen::Index rows, Eigen::Index cols) {
    CoefficientSchedule fallback = CoefficientSchedule::zero(rows, cols);
    if (j.is_array()) {  // bare matrix shorthand for a constant rule
        Eigen::MatrixXd M = parse_matrix(j, path, issues);
        if (M.rows() != rows || M.cols() != cols) {
            issues.add(path, "shape mismatch");
            return fallback;
        }
        return CoefficientSchedule::constant(M);
    }
    if (!j.is_object() || !j.contains("rule") || !j.at("rule").is_string()) {
        issues.add(path, "expected a matrix or a {rule, ...} object");
        return fallback;
    }
    const std::string rule = j.at("rule").get<std::string>();
    if (rule == "constant") {
        check_keys(j, path, {"rule", "value"}, issues);
        if (!j.contains("value")) {
            issues.add(path + ".value", "missing required key");
            return fallback;
        }
        Eigen::MatrixXd M = parse_matrix(j.at("value"), path + ".value", issues);
        if (M.rows() != rows || M.cols() != cols) {
            issues.add(path, "shape mismatch");
            return fallback;
        }
        return CoefficientSchedule::constant(M);
    }
    if (rule == "exp_discount") {
        check_keys(j, path, {"rule", "value", "rate"}, issues);
        if (!j.contains("value")) {
            issues.add(path + ".value", "missing required key");
            return fallback;
        }
        const double rate = get_num(j, path, "rate", issues, 0.0, true);
        Eigen::MatrixXd M = parse_matrix(j.at("value"), path + ".value", issues);
        if (M.rows() != rows || M.cols() != cols) {
            issues.add(path, "shape mismatch");
            return fallback;
        }
        if (rate < 0.0) {
            issues.add(path + ".rate", "must be >= 0");
            return fallback;
        }
        return CoefficientSchedule::exp_discount(M, rate);
    }
    if (rule == "tabulated") {
        check_keys(j, path, {"rule", "values"}, issues);
        if (!j.contains("values") || !j.at("values").is_array() || j.at("values").empty()) {
            issues.add(path + ".values", "expected a non-empty array of matrices");
            return fallback;
        }
        std::vector<Eigen::MatrixXd> table;
        for (std::size_t i = 0; i < j.at("values").size(); ++i) {
            Eigen::MatrixXd M = parse_matrix(j.at("values")[i],
                                             path + ".values[" + std::to_string(i) + "]", issues);
            if (M.rows() != rows || M.cols() != cols) {
                issues.add(path, "shape mismatch in table entry " + std::to_string(i));
                return fallback;
            }
            table.push_back(std::move(M));
        }
        return CoefficientSchedule::tabulated(std::move(table));
    }
    issues.add(path + ".rule", "unknown rule '" + rule + "'");
    return fallback;
}

json schedule_to_json(const CoefficientSchedule& s) {
    json j;
    switch (s.rule()) {
        case CoefficientSchedule::Rule::Constant:
            j["rule"] = "constant";
            j["value"] = matrix_to_json(s.table().front());
            break;
        case CoefficientSchedule::Rule::ExpDiscount:
            j["rule"] = "exp_discount";
            j["value"] = matrix_to_json(s.table().front());
            j["rate"] = s.rate();
            break;
        case CoefficientSchedule::Rule::Tabulated: {
            j["rule"] = "tabulated";
            json vals = json::array();
            for (const auto& M : s.table()) vals.push_back(matrix_to_json(M));
            j["values"] = vals;
            break;
        }
    }
    return j;
}

InitSpec parse_init(const json& j, const std::string& path, Issues& issues) {
    InitSpec fallback = InitSpec::point(Eigen::VectorXd::Zero(1));
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        issues.add(path, "expected {type, ...}");
        return fallback;
    }
    const std::string type = j.at("type").get<std::string>();
    try {
        if (type == "point") {
            check_keys(j, path, {"type", "value"}, issues);
            if (!j.contains("value")) {
                issues.add(path + ".value", "missing required key");
                return fallback;
            }
            Eigen::MatrixXd M = parse_matrix(j.at("value"), path + ".value", issues);
            return InitSpec::point(M.col(0));
        }
        if (type == "normal") {
            check_keys(j, path, {"type", "mean", "var", "truncated"}, issues);
            if (!j.contains("mean")) {
                issues.add(path + ".mean", "missing required key");
                return fallback;
            }
            Eigen::MatrixXd M = parse_matrix(j.at("mean"), path + ".mean", issues);
            const double var = get_num(j, path, "var", issues, 0.0, true);
            bool trunc = false;
            if (j.contains("truncated")) {
                if (!j.at("truncated").is_boolean())
                    issues.add(path + ".truncated", "expected a boolean");
                else
                    trunc = j.at("truncated").get<bool>();
            }
            return InitSpec::normal(M.col(0), var, trunc);
        }
        if (type == "lognormal") {
            check_keys(j, path, {"type", "mean_log", "sd_log", "dim"}, issues);
            const double ml = get_num(j, path, "mean_log", issues, 0.0, true);
            const double sl = get_num(j, path, "sd_log", issues, 1.0, true);
            const int dim = static_cast<int>(get_num(j, path, "dim", issues, 1.0));
            return InitSpec::lognormal(ml, sl, dim);
        }
    } catch (const StructuralError& e) {
        issues.add(path, e.what());
        return fallback;
    }
    issues.add(path + ".type", "unknown init type '" + type + "'");
    return fallback;
}

json init_to_json(const InitSpec& s) {
    json j;
    switch (s.kind) {
        case InitSpec::Kind::Point:
            j["type"] = "point";
            j["value"] = matrix_to_json(s.mean);
            break;
        case InitSpec::Kind::Normal:
            j["type"] = "normal";
            j["mean"] = matrix_to_json(s.mean);
            j["var"] = s.var;
            j["truncated"] = s.truncated;
            break;
        case InitSpec::Kind::LogNormal:
            j["type"] = "lognormal";
            j["mean_log"] = s.mlog;
            j["sd_log"] = s.slog;
            j["dim"] = s.dim;
            break;
    }
    return j;
}

const char* kScheduleNames[] = {"A", "Abar", "C", "Cbar", "F", "Fbar", "B", "Bbar",
                                "D", "Dbar", "G", "Gbar", "Q", "Qbar", "R", "Rbar",
                                "S", "Sbar", "S1bar", "S2bar", "q", "qbar", "r", "rbar"};

CoefficientSchedule* schedule_slot(CoefficientSet& cs, const std::string& name) {
    CoefficientSchedule* slots[] = {&cs.A, &cs.Abar, &cs.C, &cs.Cbar, &cs.F, &cs.Fbar,
                                    &cs.B, &cs.Bbar, &cs.D, &cs.Dbar, &cs.G, &cs.Gbar,
                                    &cs.Q, &cs.Qbar, &cs.R, &cs.Rbar, &cs.S, &cs.Sbar,
                                    &cs.S1bar, &cs.S2bar, &cs.q, &cs.qbar, &cs.r, &cs.rbar};
    for (std::size_t i = 0; i < std::size(kScheduleNames); ++i)
        if (name == kScheduleNames[i]) return slots[i];
    return nullptr;
}

std::pair<Eigen::Index, Eigen::Index> schedule_shape(const std::string& name, int d, int m) {
    if (name == "B" || name == "Bbar" || name == "D" || name == "Dbar" || name == "G" ||
        name == "Gbar")
        return {d, m};
    if (name == "R" || name == "Rbar") return {m, m};
    if (name == "S" || name == "Sbar" || name == "S1bar" || name == "S2bar") return {m, d};
    if (name == "q" || name == "qbar") return {d, 1};
    if (name == "r" || name == "rbar") return {m, 1};
    return {d, d};
}

}  // namespace

ExhaustibleParams ScenarioConfig::exhaustible_params() const {
    if (!use_exhaustible)
        throw StructuralError("config: exhaustible parameters requested for an explicit model");
    const double mean_reserve = init.mean_value()[0];
    return ex_from_epsilon
               ? ExhaustibleParams::with_epsilon(ex_mu, ex_nu, ex_nu0, ex_epsilon, grid.t0, grid.T,
                                                 mean_reserve)
               : ExhaustibleParams::with_gamma_delta(ex_mu, ex_nu, ex_nu0, ex_gamma, ex_delta,
                                                     grid.t0, grid.T, mean_reserve);
}

CoefficientSet ScenarioConfig::build_model() const {
    if (use_exhaustible) return to_coefficients(exhaustible_params(), grid.n_steps);
    return explicit_model;
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path, {path + ": missing file"});
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config is not well-formed JSON: " + std::string(e.what()),
                          {path + ": " + e.what()});
    }
    return parse_config_json(j);
}

ScenarioConfig parse_config_json(const json& j) {
    Issues issues;
    ScenarioConfig cfg;
    check_keys(j, "config", {"model", "grid", "simulation", "run", "output"}, issues);
    issues.raise_if_any();

    // grid first: the explicit model needs it for table checks
    if (!j.contains("grid")) {
        issues.add("config.grid", "missing required section");
        issues.raise_if_any();
    }
    {
        const json& g = j.at("grid");
        check_keys(g, "grid", {"t0", "T", "n_steps"}, issues);
        const double t0 = get_num(g, "grid", "t0", issues, 0.0);
        const double T = get_num(g, "grid", "T", issues, 1.0, true);
        const double ns = get_num(g, "grid", "n_steps", issues, 2.0, true);
        if (!(T > t0)) issues.add("grid.T", "must exceed t0");
        if (ns != std::floor(ns) || ns < 2) issues.add("grid.n_steps", "must be an integer >= 2");
        issues.raise_if_any();
        cfg.grid = TimeGrid(t0, T, static_cast<int>(ns));
    }

    if (!j.contains("model")) {
        issues.add("config.model", "missing required section");
        issues.raise_if_any();
    }
    {
        const json& mj = j.at("model");
        check_keys(mj, "model", {"exhaustible", "explicit"}, issues);
        const bool has_ex = mj.contains("exhaustible");
        const bool has_explicit = mj.contains("explicit");
        if (has_ex && has_explicit)
            issues.add("model", "sections 'exhaustible' and 'explicit' are mutually exclusive; "
                                "both present");
        if (!has_ex && !has_explicit)
            issues.add("model", "exactly one of 'exhaustible' or 'explicit' required");
        issues.raise_if_any();

        if (has_ex) {
            cfg.use_exhaustible = true;
            const json& e = mj.at("exhaustible");
            check_keys(e, "model.exhaustible", {"mu", "nu", "nu0", "epsilon", "gamma", "delta"},
                       issues);
            cfg.ex_mu = get_num(e, "model.exhaustible", "mu", issues, 0.0, true);
            cfg.ex_nu = get_num(e, "model.exhaustible", "nu", issues, 0.0, true);
            cfg.ex_nu0 = get_num(e, "model.exhaustible", "nu0", issues, 0.0, true);
            const bool has_eps = e.contains("epsilon");
            const bool has_gd = e.contains("gamma") || e.contains("delta");
            if (has_eps && has_gd)
                issues.add("model.exhaustible", "give either epsilon or gamma/delta, not both");
            if (!has_eps && !has_gd)
                issues.add("model.exhaustible", "competition parameters missing (epsilon or gamma/delta)");
            if (has_eps) {
                cfg.ex_from_epsilon = true;
                cfg.ex_epsilon = get_num(e, "model.exhaustible", "epsilon", issues, 0.0, true);
                if (cfg.ex_epsilon < 0.0) issues.add("model.exhaustible.epsilon", "must be >= 0");
            } else if (has_gd) {
                cfg.ex_from_epsilon = false;
                cfg.ex_gamma = get_num(e, "model.exhaustible", "gamma", issues, 1.0, true);
                cfg.ex_delta = get_num(e, "model.exhaustible", "delta", issues, 0.0, true);
            }
        } else {
            cfg.use_exhaustible = false;
            const json& e = mj.at("explicit");
            std::set<std::string> allowed{"d", "m", "H", "Hbar"};
            for (const char* n : kScheduleNames) allowed.insert(n);
            check_keys(e, "model.explicit", allowed, issues);
            const double dd = get_num(e, "model.explicit", "d", issues, 1.0, true);
            const double mm = get_num(e, "model.explicit", "m", issues, 1.0, true);
            if (dd != std::floor(dd) || dd < 1) issues.add("model.explicit.d", "must be an integer >= 1");
            if (mm != std::floor(mm) || mm < 1) issues.add("model.explicit.m", "must be an integer >= 1");
            issues.raise_if_any();
            const int d = static_cast<int>(dd), m = static_cast<int>(mm);
            cfg.explicit_model = CoefficientSet::zeros(d, m, cfg.grid);
            for (const char* name : kScheduleNames) {
                if (!e.contains(name)) continue;
                const auto [rows, cols] = schedule_shape(name, d, m);
                *schedule_slot(cfg.explicit_model, name) =
                    parse_schedule(e.at(name), std::string("model.explicit.") + name, issues, rows,
                                   cols);
            }
            if (e.contains("H")) {
                Eigen::MatrixXd H = parse_matrix(e.at("H"), "model.explicit.H", issues);
                if (H.rows() != d || H.cols() != d) issues.add("model.explicit.H", "shape mismatch");
                else cfg.explicit_model.H = H;
            }
            if (e.contains("Hbar")) {
                Eigen::MatrixXd H = parse_matrix(e.at("Hbar"), "model.explicit.Hbar", issues);
                if (H.rows() != d || H.cols() != d) issues.add("model.explicit.Hbar", "shape mismatch");
                else cfg.explicit_model.Hbar = H;
            }
            if (issues.list.empty()) {
                try {
                    cfg.explicit_model.check_shapes();
                } catch (const StructuralError& err) {
                    issues.add("model.explicit", err.what());
                }
            }
        }
    }

    if (j.contains("simulation")) {
        const json& s = j.at("simulation");
        check_keys(s, "simulation", {"seed", "paths", "particles", "mode", "init"}, issues);
        const double seed = get_num(s, "simulation", "seed", issues, 0.0);
        if (seed < 0 || seed != std::floor(seed)) issues.add("simulation.seed", "must be a non-negative integer");
        else cfg.seed = static_cast<std::uint64_t>(seed);
        const double paths = get_num(s, "simulation", "paths", issues, 1.0);
        const double parts = get_num(s, "simulation", "particles", issues, 1.0);
        if (paths < 1 || paths != std::floor(paths)) issues.add("simulation.paths", "must be an integer >= 1");
        else cfg.paths = static_cast<int>(paths);
        if (parts < 1 || parts != std::floor(parts)) issues.add("simulation.particles", "must be an integer >= 1");
        else cfg.particles = static_cast<int>(parts);
        if (s.contains("mode")) {
            if (!s.at("mode").is_string()) issues.add("simulation.mode", "expected a string");
            else {
                const std::string mode = s.at("mode").get<std::string>();
                if (mode == "estimated-mean") cfg.mode = MeanMode::Estimated;
                else if (mode == "exact-mean") cfg.mode = MeanMode::Exact;
                else issues.add("simulation.mode", "one of estimated-mean | exact-mean");
            }
        }
        if (s.contains("init")) cfg.init = parse_init(s.at("init"), "simulation.init", issues);
        else cfg.init = InitSpec::point(Eigen::VectorXd::Ones(cfg.use_exhaustible ? 1 : cfg.explicit_model.d));
    } else {
        cfg.init = InitSpec::point(Eigen::VectorXd::Ones(cfg.use_exhaustible ? 1 : cfg.explicit_model.d));
    }

    if (j.contains("run")) {
        const json& r = j.at("run");
        check_keys(r, "run",
                   {"phi_convention", "epsilon_sweep", "n_sweep", "deviation_replications",
                    "gateaux_h", "trajectory_particles"},
                   issues);
        if (r.contains("phi_convention")) {
            if (!r.at("phi_convention").is_string()) issues.add("run.phi_convention", "expected a string");
            else {
                const std::string c = r.at("phi_convention").get<std::string>();
                if (c == "terminal-zero") cfg.phi_convention = PhiConvention::TerminalZero;
                else if (c == "paper-forward-integral")
                    cfg.phi_convention = PhiConvention::PaperForwardIntegral;
                else issues.add("run.phi_convention", "one of terminal-zero | paper-forward-integral");
            }
        }
        auto num_list = [&](const char* key, std::vector<double>& out) {
            if (!r.contains(key)) return;
            if (!r.at(key).is_array()) {
                issues.add(std::string("run.") + key, "expected an array of numbers");
                return;
            }
            out.clear();
            for (const auto& x : r.at(key)) {
                if (!x.is_number()) {
                    issues.add(std::string("run.") + key, "expected numbers");
                    return;
                }
                out.push_back(x.get<double>());
            }
        };
        num_list("epsilon_sweep", cfg.epsilon_sweep);
        num_list("gateaux_h", cfg.gateaux_h);
        if (r.contains("n_sweep")) {
            if (!r.at("n_sweep").is_array()) issues.add("run.n_sweep", "expected an array");
            else {
                cfg.n_sweep.clear();
                for (const auto& x : r.at("n_sweep")) {
                    if (!x.is_number_integer() || x.get<int>() < 2) {
                        issues.add("run.n_sweep", "expected integers >= 2");
                        break;
                    }
                    cfg.n_sweep.push_back(x.get<int>());
                }
            }
        }
        const double reps = get_num(r, "run", "deviation_replications", issues,
                                    static_cast<double>(cfg.deviation_replications));
        if (reps < 1 || reps != std::floor(reps)) issues.add("run.deviation_replications", "must be an integer >= 1");
        else cfg.deviation_replications = static_cast<int>(reps);
        const double tp = get_num(r, "run", "trajectory_particles", issues,
                                  static_cast<double>(cfg.trajectory_particles));
        if (tp < 0 || tp != std::floor(tp)) issues.add("run.trajectory_particles", "must be an integer >= 0");
        else cfg.trajectory_particles = static_cast<int>(tp);
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        check_keys(o, "output", {"dir", "formats"}, issues);
        if (o.contains("dir")) {
            if (!o.at("dir").is_string()) issues.add("output.dir", "expected a string");
            else cfg.out_dir = o.at("dir").get<std::string>();
        }
        if (o.contains("formats")) {
            if (!o.at("formats").is_array()) issues.add("output.formats", "expected an array");
            else {
                cfg.formats.clear();
                for (const auto& f : o.at("formats")) {
                    if (!f.is_string() || f.get<std::string>() != "csv") {
                        issues.add("output.formats", "only 'csv' is supported");
                        break;
                    }
                    cfg.formats.push_back(f.get<std::string>());
                }
            }
        }
    }

    // dimension cross-checks
    if (issues.list.empty()) {
        const int d = cfg.use_exhaustible ? 1 : cfg.explicit_model.d;
        if (cfg.init.dim != d)
            issues.add("simulation.init", "dimension " + std::to_string(cfg.init.dim) +
                                              " does not match state dimension " + std::to_string(d));
        if (cfg.use_exhaustible) {
            try {
                cfg.exhaustible_params();
            } catch (const StructuralError& e) {
                issues.add("model.exhaustible", e.what());
            }
        }
    }

    issues.raise_if_any();
    return cfg;
}

nlohmann::json ScenarioConfig::to_json() const {
    json j;
    if (use_exhaustible) {
        json e;
        e["mu"] = ex_mu;
        e["nu"] = ex_nu;
        e["nu0"] = ex_nu0;
        if (ex_from_epsilon) {
            e["epsilon"] = ex_epsilon;
        } else {
            e["gamma"] = ex_gamma;
            e["delta"] = ex_delta;
        }
        j["model"]["exhaustible"] = e;
    } else {
        json e;
        e["d"] = explicit_model.d;
        e["m"] = explicit_model.m;
        const CoefficientSchedule* slots[] = {
            &explicit_model.A, &explicit_model.Abar, &explicit_model.C, &explicit_model.Cbar,
            &explicit_model.F, &explicit_model.Fbar, &explicit_model.B, &explicit_model.Bbar,
            &explicit_model.D, &explicit_model.Dbar, &explicit_model.G, &explicit_model.Gbar,
            &explicit_model.Q, &explicit_model.Qbar, &explicit_model.R, &explicit_model.Rbar,
            &explicit_model.S, &explicit_model.Sbar, &explicit_model.S1bar, &explicit_model.S2bar,
            &explicit_model.q, &explicit_model.qbar, &explicit_model.r, &explicit_model.rbar};
        for (std::size_t i = 0; i < std::size(kScheduleNames); ++i)
            e[kScheduleNames[i]] = schedule_to_json(*slots[i]);
        e["H"] = matrix_to_json(explicit_model.H);
        e["Hbar"] = matrix_to_json(explicit_model.Hbar);
        j["model"]["explicit"] = e;
    }
    j["grid"]["t0"] = grid.t0;
    j["grid"]["T"] = grid.T;
    j["grid"]["n_steps"] = grid.n_steps;
    j["simulation"]["seed"] = seed;
    j["simulation"]["paths"] = paths;
    j["simulation"]["particles"] = particles;
    j["simulation"]["mode"] = to_string(mode);
    j["simulation"]["init"] = init_to_json(init);
    j["run"]["phi_convention"] = to_string(phi_convention);
    j["run"]["epsilon_sweep"] = epsilon_sweep;
    j["run"]["n_sweep"] = n_sweep;
    j["run"]["deviation_replications"] = deviation_replications;
    j["run"]["gateaux_h"] = gateaux_h;
    j["run"]["trajectory_particles"] = trajectory_particles;
    j["output"]["dir"] = out_dir;
    j["output"]["formats"] = formats;
    return j;
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
    return a.to_json() == b.to_json();
}

}  // namespace mflq
