#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "peco/dep.hpp"
#include "peco/errors.hpp"
#include "peco/problem.hpp"
#include "peco/rng.hpp"

using namespace peco;

namespace {

ProblemSpec one_dim_chase() {
    nlohmann::json j = {{"n", 1},
                        {"u", 1},
                        {"objective", "x1"},
                        {"constraints", {"xi1 - x1"}},
                        {"bounds", {{-10, 10}}},
                        {"start", {0}}};
    return problem_from_json(j);
}

ProblemSpec half_plane_quadratic() {
    nlohmann::json j = {{"n", 2},
                        {"u", 1},
                        {"objective", "x1^2 + x2^2"},
                        {"constraints", {"xi1 - x1 - x2"}},
                        {"bounds", {{-10, 10}, {-10, 10}}},
                        {"start", {0, 0}}};
    return problem_from_json(j);
}

ProblemSpec corner_problem() { return load_problem("fixtures/corner_problem.json"); }

SolverConfig grid_config() {
    SolverConfig cfg;
    cfg.solver_id = kSolverGridOracle;
    return cfg;
}

}  // namespace

TEST_CASE("scalar chase: the largest point binds") {
    ProblemSpec spec = one_dim_chase();
    DataSet emb = make_dataset(1, {{1}, {3}, {2}});
    for (const auto& cfg : {SolverConfig{}, grid_config()}) {
        Solution s = solve(build_dep(spec, emb), cfg);
        CAPTURE(cfg.solver_id);
        CHECK(s.status == SolveStatus::Optimal);
        CHECK(std::abs(s.x_star[0] - 3.0) <= 1e-6);
        CHECK(s.active_data_points == std::vector<std::size_t>{1});
    }
}

TEST_CASE("quadratic with one half-plane lands mid-edge") {
    ProblemSpec spec = half_plane_quadratic();
    DataSet emb = make_dataset(1, {{1}});
    for (const auto& cfg : {SolverConfig{}, grid_config()}) {
        Solution s = solve(build_dep(spec, emb), cfg);
        CAPTURE(cfg.solver_id);
        CHECK(s.status == SolveStatus::Optimal);
        CHECK(std::abs(s.x_star[0] - 0.5) <= 1e-5);
        CHECK(std::abs(s.x_star[1] - 0.5) <= 1e-5);
        CHECK(std::abs(s.objective_value - 0.5) <= 1e-5);
    }
}

TEST_CASE("componentwise max on the corner problem") {
    ProblemSpec spec = corner_problem();
    DataSet emb = make_dataset(2, {{1, 3}, {3, 1}, {2, 2}});
    for (const auto& cfg : {SolverConfig{}, grid_config()}) {
        Solution s = solve(build_dep(spec, emb), cfg);
        CAPTURE(cfg.solver_id);
        CHECK(std::abs(s.x_star[0] - 3.0) <= 1e-6);
        CHECK(std::abs(s.x_star[1] - 3.0) <= 1e-6);
        CHECK(s.active_data_points == std::vector<std::size_t>{0, 1});
    }
}

TEST_CASE("duplicates collapse to the same program") {
    ProblemSpec spec = corner_problem();
    DataSet dups = make_dataset(2, {{1, 3}, {1, 3}, {3, 1}, {1, 3}, {3, 1}});
    DataSet dedup = to_dataset(underlying_set(dups));
    CHECK(build_dep(spec, dups).constraints.size() == build_dep(spec, dedup).constraints.size());
    for (const auto& cfg : {SolverConfig{}, grid_config()}) {
        std::string a = solution_to_json(solve(build_dep(spec, dups), cfg), cfg).dump();
        std::string b = solution_to_json(solve(build_dep(spec, dedup), cfg), cfg).dump();
        CAPTURE(cfg.solver_id);
        CHECK(a == b);
    }
    // raw materialization with repeated rows: same feasible set, same optimum
    ScenarioSet raw;
    raw.dimension = 2;
    raw.scenarios = dups.points;
    raw.counts.assign(dups.points.size(), 1);
    Solution with_dups = solve(make_instance(spec, raw), grid_config());
    Solution collapsed = solve(build_dep(spec, dedup), grid_config());
    CHECK(with_dups.x_star == collapsed.x_star);
    CHECK(with_dups.objective_value == collapsed.objective_value);
}

TEST_CASE("repeat solves are bit-identical") {
    ProblemSpec spec = half_plane_quadratic();
    DataSet emb = make_dataset(1, {{1}, {-2}});
    for (const auto& cfg : {SolverConfig{}, grid_config()}) {
        std::string first = solution_to_json(solve(build_dep(spec, emb), cfg), cfg).dump();
        for (int r = 0; r < 2; ++r)
            CHECK(solution_to_json(solve(build_dep(spec, emb), cfg), cfg).dump() == first);
    }
}

TEST_CASE("infeasible scenarios are reported, not disguised") {
    ProblemSpec spec = one_dim_chase();
    DataSet emb = make_dataset(1, {{20}});  // demands x1 >= 20, above the box
    for (const auto& cfg : {SolverConfig{}, grid_config()}) {
        Solution s = solve(build_dep(spec, emb), cfg);
        CAPTURE(cfg.solver_id);
        CHECK(s.status == SolveStatus::Infeasible);
    }
}

TEST_CASE("empty scenario set leaves only the box") {
    ProblemSpec spec = one_dim_chase();
    ScenarioSet empty;
    empty.dimension = 1;
    for (const auto& cfg : {SolverConfig{}, grid_config()}) {
        Solution s = solve(make_instance(spec, empty), cfg);
        CAPTURE(cfg.solver_id);
        CHECK(s.status == SolveStatus::Optimal);
        CHECK(std::abs(s.x_star[0] - (-10.0)) <= 1e-6);
    }
}

TEST_CASE("grid restriction is monotone") {
    // adding scenarios can only shrink the feasible set, never improve the optimum
    ProblemSpec spec = corner_problem();
    SolverConfig cfg = grid_config();
    SplitMix64 rng(5150);
    for (int round = 0; round < 10; ++round) {
        std::vector<DataPoint> pts;
        for (int i = 0; i < 6; ++i)
            pts.push_back({static_cast<double>(rng.uniform_below(9)) - 4.0,
                           static_cast<double>(rng.uniform_below(9)) - 4.0});
        double prev = -1e300;
        for (std::size_t take = 1; take <= pts.size(); ++take) {
            DataSet emb = make_dataset(2, {pts.begin(), pts.begin() + take});
            Solution s = solve(build_dep(spec, emb), cfg);
            REQUIRE(s.status == SolveStatus::Optimal);
            CHECK(s.objective_value >= prev - 1e-12);
            prev = s.objective_value;
        }
    }
}

TEST_CASE("solution equality tolerance") {
    Solution a, b;
    a.x_star = {1.0, 2.0};
    b.x_star = {1.0 + 5e-7, 2.0};
    a.status = b.status = SolveStatus::Optimal;
    CHECK(solutions_equal(a, b, 1e-6));
    b.x_star[0] = 1.0 + 2e-6;
    CHECK_FALSE(solutions_equal(a, b, 1e-6));
    b.x_star[0] = 1.0;
    b.status = SolveStatus::Infeasible;
    CHECK_FALSE(solutions_equal(a, b, 1e-6));
}

TEST_CASE("grid oracle refuses high dimensions") {
    nlohmann::json j = {{"n", 3},
                        {"u", 1},
                        {"objective", "x1 + x2 + x3"},
                        {"constraints", {"xi1 - x1"}},
                        {"bounds", {{-1, 1}, {-1, 1}, {-1, 1}}},
                        {"start", {0, 0, 0}}};
    ProblemSpec spec = problem_from_json(j);
    DataSet emb = make_dataset(1, {{0}});
    try {
        solve(build_dep(spec, emb), grid_config());
        FAIL("expected GridOracleDimension");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GridOracleDimension);
    }
}

TEST_CASE("kinks in constraints need explicit smoothing") {
    nlohmann::json j = {{"n", 1},
                        {"u", 1},
                        {"objective", "x1"},
                        {"constraints", {"abs(xi1) - x1"}},
                        {"bounds", {{-10, 10}}},
                        {"start", {0}}};
    ProblemSpec spec = problem_from_json(j);
    DataSet emb = make_dataset(1, {{-3}});
    try {
        solve(build_dep(spec, emb), SolverConfig{});
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
    }
    SolverConfig smooth;
    smooth.abs_smoothing = 1e-9;
    Solution s = solve(build_dep(spec, emb), smooth);
    CHECK(std::abs(s.x_star[0] - 3.0) <= 1e-5);
    // the grid oracle evaluates without derivatives, no smoothing needed
    Solution g = solve(build_dep(spec, emb), grid_config());
    CHECK(std::abs(g.x_star[0] - 3.0) <= 1e-5);
}

TEST_CASE("violation measures") {
    ProblemSpec spec = one_dim_chase();
    DepInstance inst = build_dep(spec, make_dataset(1, {{2}, {4}}));
    CHECK(max_violation(inst, {5.0}) == 0.0);
    CHECK(max_violation(inst, {1.0}) == 3.0);
    CHECK(is_feasible(inst, {4.0}, 1e-9));
    CHECK_FALSE(is_feasible(inst, {3.999}, 1e-9));
}

TEST_CASE("solution json carries the reproducibility fields") {
    ProblemSpec spec = one_dim_chase();
    SolverConfig cfg;
    Solution s = solve(build_dep(spec, make_dataset(1, {{1}})), cfg);
    auto j = solution_to_json(s, cfg);
    CHECK(j.contains("solver_id"));
    CHECK(j.contains("start"));
    CHECK(j.contains("iterations"));
    CHECK(j["tolerances"].contains("eps_feas"));
    CHECK(j["tolerances"].contains("eps_sol"));
    CHECK(j["tolerances"].contains("eps_act"));
}
