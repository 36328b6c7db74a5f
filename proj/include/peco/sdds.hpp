#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "peco/dep.hpp"

namespace peco {

// Everything the family's validity depends on; a mismatch invalidates any
// downstream sample-size computation.
struct SolverFingerprint {
    std::string solver_id;
    std::vector<double> start;
    double eps_feas = 0.0;
    double eps_sol = 0.0;
    double eps_act = 0.0;
};

SolverFingerprint fingerprint_of(const SolverConfig& cfg, const ProblemSpec& spec);
bool fingerprints_match(const SolverFingerprint& a, const SolverFingerprint& b);

struct ProbeSettings {
    std::size_t nodes_per_axis = 41;
};

struct BfdsResult {
    std::vector<std::size_t> indices;  // scenario indices forming the reduced set
    std::size_t probe_points = 0;
    bool certified = false;      // exact analysis (pure variable-bound constraints)
    bool probe_too_coarse = false;  // two refinements disagreed
    bool minimality_tied = false;   // several equally small subsets exist
};

// Smallest scenario subset that classifies every probe point like the full
// set, by greedy backward elimination; exact for constraints of the shape
// xi_j - x_i or x_i - xi_j.
BfdsResult find_bfds(const ProblemSpec& spec, const ScenarioSet& full,
                     const ProbeSettings& probe = {});

struct SddsFamily {
    std::vector<std::vector<std::size_t>> sets;  // scenario indices, each sorted
    // (member index subset, size of the union of those members), ordered by
    // subset size then lexicographic content
    std::vector<std::pair<std::vector<std::size_t>, std::size_t>> r_bar;
    SolverFingerprint fingerprint;

    std::size_t size() const { return sets.size(); }
};

// Exhaustively re-solves every scenario subset (ascending size) and keeps
// those that reproduce the full solution and lose it under every
// single-point removal. Empty family is a legitimate outcome.
SddsFamily enumerate_sdds(const ProblemSpec& spec, const ScenarioSet& full,
                          const SolverConfig& cfg, std::size_t cutoff = 15);

// The (index subset, union size) table in deterministic order.
std::vector<std::pair<std::vector<std::size_t>, std::size_t>> r_bar_vector(
    const SddsFamily& family);

nlohmann::ordered_json family_to_json(const SddsFamily& family);
SddsFamily family_from_json(const nlohmann::json& j);
SddsFamily load_family(const std::string& path);

}  // namespace peco
