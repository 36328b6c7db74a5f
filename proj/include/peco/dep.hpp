#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "peco/data.hpp"
#include "peco/problem.hpp"

namespace peco {

inline constexpr const char* kSolverBuiltinPenalty = "builtin-penalty";
inline constexpr const char* kSolverGridOracle = "grid-oracle";

// Finite deterministic program: one materialized constraint per
// (constraint expression, embedded scenario) pair, constraint-major.
struct DepInstance {
    ProblemSpec spec;
    ScenarioSet embedded;

    struct MaterializedConstraint {
        std::size_t constraint_index;
        std::size_t scenario_index;
    };
    std::vector<MaterializedConstraint> constraints;
};

struct SolverConfig {
    std::string solver_id = kSolverBuiltinPenalty;
    std::vector<double> start;  // empty: use the problem's start point

    double eps_feas = 1e-8;  // feasibility tolerance
    double eps_sol = 1e-6;   // solution-equality tolerance (infinity norm)
    double eps_act = 1e-6;   // activity tolerance (diagnostic only)

    // penalty continuation (first-order, deterministic)
    double mu_initial = 1.0;
    double mu_factor = 10.0;
    std::size_t max_rounds = 12;
    std::size_t max_inner_iterations = 4000;
    double step_initial = 1.0;
    double step_shrink = 0.5;
    double armijo = 1e-4;
    std::size_t max_halvings = 60;
    double gradient_tolerance = 1e-9;  // relative to max(1, |f|)

    // exhaustive oracle (n <= 2)
    std::size_t grid_nodes = 2001;

    // abs() is refused in constraints unless a smoothing epsilon is set
    double abs_smoothing = 0.0;
};

enum class SolveStatus { Optimal, Infeasible, MaxIterations };

struct Solution {
    std::vector<double> x_star;
    double objective_value = 0.0;
    SolveStatus status = SolveStatus::Optimal;
    std::vector<std::size_t> active_data_points;  // embedded indices with a near-active constraint
    std::string solver_id;
    std::vector<double> start;
    std::size_t iterations = 0;
};

// Deduplicates the embedded multiset and materializes the constraint grid.
DepInstance build_dep(const ProblemSpec& spec, const DataSet& emb);

// Same instance shape without the non-empty check; used where the empty
// program (no embedded points) is a legitimate object to solve.
DepInstance make_instance(const ProblemSpec& spec, const ScenarioSet& embedded);

bool is_feasible(const DepInstance& inst, const std::vector<double>& x, double tol);
double max_violation(const DepInstance& inst, const std::vector<double>& x);

// Deterministic solve: identical (inst, cfg) always yields a bit-identical
// Solution. Throws only on misconfiguration; infeasibility and iteration
// exhaustion are reported in the status field.
Solution solve(const DepInstance& inst, const SolverConfig& cfg);

bool solutions_equal(const Solution& a, const Solution& b, double eps_sol);

// Run report carrying everything that must be held fixed for reproducibility.
nlohmann::ordered_json solution_to_json(const Solution& s, const SolverConfig& cfg);

const char* solve_status_name(SolveStatus status);

}  // namespace peco
