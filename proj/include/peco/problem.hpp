#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "peco/expr.hpp"

namespace peco {

// A decision problem as data: minimize objective(x) subject to every
// constraint expression <= 0 at each embedded uncertainty point, within box
// bounds. delta carries user-declared deterministic parameters used only for
// the history-based size predictor.
struct ProblemSpec {
    std::size_t n = 0;  // decision dimension
    std::size_t u = 0;  // uncertainty dimension
    Expression objective;
    std::vector<Expression> constraints;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> start;
    std::vector<double> delta;

    std::size_t constraint_count() const { return constraints.size(); }
};

ProblemSpec problem_from_json(const nlohmann::json& j);
ProblemSpec load_problem(const std::string& path);
nlohmann::ordered_json problem_to_json(const ProblemSpec& spec);

// FNV-1a over (n, u, objective, constraints, bounds). delta is excluded on
// purpose: records with different parameters but the same decision problem
// must share a digest for history retrieval.
std::uint64_t problem_digest(const ProblemSpec& spec);

}  // namespace peco
