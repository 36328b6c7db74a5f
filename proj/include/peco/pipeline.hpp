#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "peco/data.hpp"
#include "peco/dep.hpp"
#include "peco/problem.hpp"
#include "peco/samplesize.hpp"
#include "peco/sdds.hpp"
#include "peco/store.hpp"

namespace peco {

SolverConfig solver_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json solver_config_to_json(const SolverConfig& cfg);

struct PipelineConfig {
    enum class Mode { Exact, Learned };

    std::string problem_path;
    std::string data_path;
    double alpha = 0.0;
    double eta = 0.0;
    bool use_eta_rule = false;  // exactly one of eta / eta_rule in the JSON
    VicinityNorm norm = VicinityNorm::L2;
    double target = 0.0;        // coverage target, in (0, 1]
    std::uint64_t seed = 0;
    SolverConfig solver;
    Mode mode = Mode::Exact;
    std::size_t neighbors = 5;  // learned mode only
};

PipelineConfig pipeline_config_from_json(const nlohmann::json& j);
PipelineConfig load_pipeline_config(const std::string& path);

// Everything the four stages produced. Serialization is fully determined by
// the config (no timestamps, no paths), so identical configs give
// byte-identical reports.
struct PipelineReport {
    std::string mode;
    std::uint64_t seed = 0;
    std::string problem_digest;
    std::string dataset_digest;
    std::size_t data_size = 0;
    double alpha = 0.0;
    double eta = 0.0;
    std::size_t d_alpha_size = 0;
    std::vector<DataPoint> underlying_points;
    SddsFamily family;  // sets empty in learned mode
    std::vector<std::pair<std::size_t, std::size_t>> r_bar;
    std::size_t family_size = 0;
    double target = 0.0;
    std::size_t z = 0;
    double rho_at_z = 0.0;
    std::vector<std::size_t> embedded_indices;
    Solution solution;
    SolverConfig solver;
};

nlohmann::ordered_json report_to_json(const PipelineReport& report);

// Runs the four stages: probable-data filtering, family acquisition
// (exhaustive or learned from history), sample sizing plus the embedded draw,
// and the final solve. Appends a RunRecord unless store_path is empty.
// Stage failures rethrow the underlying error with a stage tag prefix.
PipelineReport run_pipeline(const PipelineConfig& cfg, const std::string& store_path);

}  // namespace peco
