#include "peco/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "peco/errors.hpp"
#include "peco/rng.hpp"

namespace peco {

namespace {

std::string hex_digest(std::uint64_t value) {
    std::ostringstream out;
    out << std::hex << value;
    return out.str();
}

[[noreturn]] void rethrow_tagged(const Error& e, int stage, const std::string& name) {
    throw Error(e.code(), "stage " + std::to_string(stage) + " (" + name + "): " + e.what());
}

}  // namespace

SolverConfig solver_config_from_json(const nlohmann::json& j) {
    SolverConfig cfg;
    try {
        if (j.contains("solver_id")) cfg.solver_id = j["solver_id"].get<std::string>();
        if (j.contains("start")) cfg.start = j["start"].get<std::vector<double>>();
        if (j.contains("eps_feas")) cfg.eps_feas = j["eps_feas"].get<double>();
        if (j.contains("eps_sol")) cfg.eps_sol = j["eps_sol"].get<double>();
        if (j.contains("eps_act")) cfg.eps_act = j["eps_act"].get<double>();
        if (j.contains("mu_initial")) cfg.mu_initial = j["mu_initial"].get<double>();
        if (j.contains("mu_factor")) cfg.mu_factor = j["mu_factor"].get<double>();
        if (j.contains("max_rounds")) cfg.max_rounds = j["max_rounds"].get<std::size_t>();
        if (j.contains("max_inner_iterations"))
            cfg.max_inner_iterations = j["max_inner_iterations"].get<std::size_t>();
        if (j.contains("grid_nodes")) cfg.grid_nodes = j["grid_nodes"].get<std::size_t>();
        if (j.contains("abs_smoothing")) cfg.abs_smoothing = j["abs_smoothing"].get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("bad solver config: ") + e.what());
    }
    if (cfg.solver_id != kSolverBuiltinPenalty && cfg.solver_id != kSolverGridOracle)
        throw Error(ErrorCode::ConfigError, "unknown solver id '" + cfg.solver_id + "'");
    return cfg;
}

nlohmann::ordered_json solver_config_to_json(const SolverConfig& cfg) {
    nlohmann::ordered_json j;
    j["solver_id"] = cfg.solver_id;
    if (!cfg.start.empty()) j["start"] = cfg.start;
    j["eps_feas"] = cfg.eps_feas;
    j["eps_sol"] = cfg.eps_sol;
    j["eps_act"] = cfg.eps_act;
    if (cfg.solver_id == kSolverGridOracle)
        j["grid_nodes"] = cfg.grid_nodes;
    return j;
}

PipelineConfig pipeline_config_from_json(const nlohmann::json& j) {
    PipelineConfig cfg;
    try {
        cfg.problem_path = j.at("problem").get<std::string>();
        cfg.data_path = j.at("data").get<std::string>();
        cfg.alpha = j.at("alpha").get<double>();
        const bool has_eta = j.contains("eta");
        const bool has_rule = j.contains("eta_rule") && j["eta_rule"].get<bool>();
        if (has_eta == has_rule)
            throw Error(ErrorCode::ConfigError,
                        "give exactly one of 'eta' or 'eta_rule': true");
        if (has_eta) cfg.eta = j["eta"].get<double>();
        cfg.use_eta_rule = has_rule;
        if (j.contains("norm")) {
            std::string norm = j["norm"].get<std::string>();
            if (norm == "l2")
                cfg.norm = VicinityNorm::L2;
            else if (norm == "linf")
                cfg.norm = VicinityNorm::LInf;
            else
                throw Error(ErrorCode::ConfigError, "norm must be 'l2' or 'linf'");
        }
        cfg.target = j.at("target").get<double>();
        cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("solver")) cfg.solver = solver_config_from_json(j["solver"]);
        std::string mode = j.value("mode", std::string("exact"));
        if (mode == "exact")
            cfg.mode = PipelineConfig::Mode::Exact;
        else if (mode == "learned")
            cfg.mode = PipelineConfig::Mode::Learned;
        else
            throw Error(ErrorCode::ConfigError, "mode must be 'exact' or 'learned'");
        if (j.contains("neighbors")) cfg.neighbors = j["neighbors"].get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("bad pipeline config: ") + e.what());
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw Error(ErrorCode::ConfigError, "alpha must lie in (0, 1)");
    if (!cfg.use_eta_rule && !(cfg.eta > 0.0))
        throw Error(ErrorCode::ConfigError, "eta must be positive");
    if (!(cfg.target > 0.0 && cfg.target <= 1.0))
        throw Error(ErrorCode::ConfigError, "target must lie in (0, 1]");
    return cfg;
}

PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigError, "bad JSON in " + path + ": " + e.what());
    }
    return pipeline_config_from_json(j);
}

nlohmann::ordered_json report_to_json(const PipelineReport& report) {
    nlohmann::ordered_json j;
    j["mode"] = report.mode;
    j["prng"] = std::string(kPrngName);
    j["seed"] = report.seed;
    j["problem_digest"] = report.problem_digest;
    j["dataset_digest"] = report.dataset_digest;
    j["data_size"] = report.data_size;
    j["alpha"] = report.alpha;
    j["eta"] = report.eta;
    j["d_alpha_size"] = report.d_alpha_size;
    j["underlying_points"] = report.underlying_points;
    nlohmann::ordered_json family;
    if (!report.family.sets.empty()) family["sets"] = report.family.sets;
    auto r_bar = nlohmann::ordered_json::array();
    for (const auto& [j_size, united] : report.r_bar) r_bar.push_back({j_size, united});
    family["r_bar"] = r_bar;
    family["size"] = report.family_size;
    j["family"] = family;
    j["target"] = report.target;
    j["z"] = report.z;
    j["rho_at_z"] = report.rho_at_z;
    j["embedded_indices"] = report.embedded_indices;
    j["solution"] = solution_to_json(report.solution, report.solver);
    return j;
}

PipelineReport run_pipeline(const PipelineConfig& cfg, const std::string& store_path) {
    PipelineReport report;
    report.mode = cfg.mode == PipelineConfig::Mode::Exact ? "exact" : "learned";
    report.seed = cfg.seed;
    report.target = cfg.target;
    report.solver = cfg.solver;

    // stage 1: probable data
    ProblemSpec problem;
    DataSet data;
    ScenarioSet underlying;
    try {
        problem = load_problem(cfg.problem_path);
        data = load_csv(cfg.data_path);
        if (data.dimension != problem.u)
            throw Error(ErrorCode::DimensionError,
                        "data has " + std::to_string(data.dimension) +
                            " components, problem expects " + std::to_string(problem.u));
        report.problem_digest = hex_digest(problem_digest(problem));
        report.dataset_digest = hex_digest(dataset_digest(data));
        report.data_size = data.size();
        report.alpha = cfg.alpha;
        report.eta = cfg.use_eta_rule ? eta_rule(data) : cfg.eta;
        DataSet d_alpha = build_d_alpha(data, cfg.alpha, report.eta, cfg.norm);
        if (d_alpha.points.empty())
            throw Error(ErrorCode::EmptyProbableSet,
                        "no point reaches vicinity mass " + format_double(cfg.alpha));
        report.d_alpha_size = d_alpha.size();
        underlying = underlying_set(d_alpha);
        report.underlying_points = underlying.scenarios;
    } catch (const Error& e) {
        rethrow_tagged(e, 1, "data");
    }

    // stage 2: determining-set family
    try {
        if (cfg.mode == PipelineConfig::Mode::Exact) {
            report.family = enumerate_sdds(problem, underlying, cfg.solver);
            if (report.family.sets.empty())
                throw Error(ErrorCode::FamilyEmpty, "no single-removal-critical subset found");
            report.r_bar = rho_input_from_family(report.family, underlying.size()).entries;
            report.family_size = report.family.sets.size();
        } else {
            auto history = store_query(store_path, report.problem_digest);
            report.r_bar = predict_r_bar(history.records, problem.delta, cfg.neighbors);
            std::size_t r = 0;
            while ((std::size_t{1} << r) - 1 < report.r_bar.size()) ++r;
            report.family_size = r;
            report.family.fingerprint = fingerprint_of(cfg.solver, problem);
        }
    } catch (const Error& e) {
        rethrow_tagged(e, 2, "family");
    }

    // stage 3: sample size and the embedded draw
    ScenarioSet embedded;
    try {
        RhoInput input;
        input.d_underlying_size = underlying.size();
        input.entries = report.r_bar;
        report.z = min_z(input, cfg.target);
        report.rho_at_z = rho(input, report.z);
        report.embedded_indices = draw_d_emb(underlying.size(), report.z, cfg.seed);
        embedded.dimension = underlying.dimension;
        embedded.kinds = underlying.kinds;
        for (std::size_t idx : report.embedded_indices) {
            embedded.scenarios.push_back(underlying.scenarios[idx]);
            embedded.counts.push_back(1);
        }
    } catch (const Error& e) {
        rethrow_tagged(e, 3, "size");
    }

    // stage 4: solve the embedded program
    try {
        report.solution = solve(make_instance(problem, embedded), cfg.solver);
    } catch (const Error& e) {
        rethrow_tagged(e, 4, "solve");
    }

    if (!store_path.empty()) {
        try {
            RunRecord record;
            record.problem_digest = report.problem_digest;
            record.dataset_digest = report.dataset_digest;
            record.delta = problem.delta;
            record.family_size = report.family_size;
            record.r_bar = report.r_bar;
            record.fingerprint = fingerprint_of(cfg.solver, problem);
            record.seed = cfg.seed;
            record.alpha = report.alpha;
            record.eta = report.eta;
            record.z = report.z;
            record.x_star = report.solution.x_star;
            record.objective = report.solution.objective_value;
            record.timestamp = utc_timestamp();
            store_append(store_path, record);
        } catch (const Error& e) {
            rethrow_tagged(e, 4, "store");
        }
    }
    return report;
}

}  // namespace peco
