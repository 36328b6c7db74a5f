#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>

#include "peco/errors.hpp"
#include "peco/sdds.hpp"

using namespace peco;

namespace {

ProblemSpec scalar_chase() {
    nlohmann::json j = {{"n", 1},
                        {"u", 1},
                        {"objective", "x1"},
                        {"constraints", {"xi1 - x1"}},
                        {"bounds", {{-10, 10}}},
                        {"start", {0}}};
    return problem_from_json(j);
}

ProblemSpec corner_problem() { return load_problem("fixtures/corner_problem.json"); }

ScenarioSet scenarios_of(std::size_t dim, const std::vector<DataPoint>& pts) {
    ScenarioSet s;
    s.dimension = dim;
    s.scenarios = pts;
    s.counts.assign(pts.size(), 1);
    return s;
}

SddsFamily family_of(const std::vector<std::vector<std::size_t>>& sets) {
    SddsFamily f;
    f.sets = sets;
    f.r_bar = r_bar_vector(f);
    return f;
}

}  // namespace

TEST_CASE("scalar chase has a single singleton determining set") {
    SolverConfig cfg;
    SddsFamily family = enumerate_sdds(scalar_chase(), scenarios_of(1, {{1}, {3}, {2}}), cfg);
    REQUIRE(family.size() == 1);
    CHECK(family.sets[0] == std::vector<std::size_t>{1});
    REQUIRE(family.r_bar.size() == 1);
    CHECK(family.r_bar[0].second == 1);
    CHECK(family.fingerprint.solver_id == cfg.solver_id);
}

TEST_CASE("the corner program is pinned by the two axis maxima") {
    ScenarioSet pts = scenarios_of(2, {{2, 1}, {2, 2}, {2, 3}, {3, 2}});
    SolverConfig cfg;
    cfg.solver_id = kSolverGridOracle;
    SddsFamily family = enumerate_sdds(corner_problem(), pts, cfg);
    REQUIRE(family.size() == 1);
    CHECK(family.sets[0] == std::vector<std::size_t>{2, 3});

    // definitional re-check through the solver: the pair reproduces the full
    // optimum, each single removal loses it
    Solution full = solve(make_instance(corner_problem(), pts), cfg);
    Solution pair = solve(make_instance(corner_problem(), scenarios_of(2, {{2, 3}, {3, 2}})), cfg);
    CHECK(solutions_equal(pair, full, cfg.eps_sol));
    for (const auto& lone : {DataPoint{2, 3}, DataPoint{3, 2}}) {
        Solution s = solve(make_instance(corner_problem(), scenarios_of(2, {lone})), cfg);
        CHECK_FALSE(solutions_equal(s, full, cfg.eps_sol));
    }
}

TEST_CASE("family members are mutually non-nested and ordered") {
    ScenarioSet pts = scenarios_of(2, {{2, 1}, {2, 2}, {2, 3}, {3, 2}, {1, 1}});
    SolverConfig cfg;
    cfg.solver_id = kSolverGridOracle;
    SddsFamily family = enumerate_sdds(corner_problem(), pts, cfg);
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t k = 0; k < family.size(); ++k) {
            if (i == k) continue;
            bool subset = std::includes(family.sets[k].begin(), family.sets[k].end(),
                                        family.sets[i].begin(), family.sets[i].end());
            CHECK_FALSE(subset);
        }
        if (i > 0) CHECK(family.sets[i - 1].size() <= family.sets[i].size());
    }
}

TEST_CASE("enumeration refuses more than 15 scenarios") {
    std::vector<DataPoint> many;
    for (int i = 0; i < 16; ++i) many.push_back({static_cast<double>(i)});
    try {
        enumerate_sdds(scalar_chase(), scenarios_of(1, many), SolverConfig{});
        FAIL("expected ExactModeTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ExactModeTooLarge);
    }
}

TEST_CASE("union table for two disjoint singletons") {
    SddsFamily f = family_of({{4}, {7}});
    REQUIRE(f.r_bar.size() == 3);
    CHECK(f.r_bar[0] == std::pair<std::vector<std::size_t>, std::size_t>{{1}, 1});
    CHECK(f.r_bar[1] == std::pair<std::vector<std::size_t>, std::size_t>{{2}, 1});
    CHECK(f.r_bar[2] == std::pair<std::vector<std::size_t>, std::size_t>{{1, 2}, 2});
}

TEST_CASE("union table for two overlapping pairs") {
    SddsFamily f = family_of({{0, 1}, {1, 2}});
    REQUIRE(f.r_bar.size() == 3);
    CHECK(f.r_bar[0].second == 2);
    CHECK(f.r_bar[1].second == 2);
    CHECK(f.r_bar[2].second == 3);
}

TEST_CASE("empty family has no union table") {
    SddsFamily empty;
    CHECK_THROWS_AS(r_bar_vector(empty), Error);
}

TEST_CASE("boundary reduction, certified path") {
    BfdsResult r = find_bfds(corner_problem(), scenarios_of(2, {{2, 1}, {2, 2}, {2, 3}, {3, 2}}));
    CHECK(r.certified);
    CHECK_FALSE(r.minimality_tied);
    CHECK(r.indices == std::vector<std::size_t>{2, 3});

    BfdsResult lone = find_bfds(scalar_chase(), scenarios_of(1, {{1}, {3}, {2}}));
    CHECK(lone.certified);
    CHECK(lone.indices == std::vector<std::size_t>{1});
}

TEST_CASE("boundary reduction reports extremum ties") {
    nlohmann::json j = {{"n", 1},
                        {"u", 2},
                        {"objective", "x1"},
                        {"constraints", {"xi1 - x1"}},
                        {"bounds", {{-10, 10}}},
                        {"start", {0}}};
    ProblemSpec spec = problem_from_json(j);
    BfdsResult r = find_bfds(spec, scenarios_of(2, {{3, 1}, {3, 2}, {1, 1}}));
    CHECK(r.certified);
    CHECK(r.minimality_tied);
    CHECK(r.indices == std::vector<std::size_t>{0});  // first achiever wins
}

TEST_CASE("boundary reduction, probe path") {
    nlohmann::json j = {{"n", 1},
                        {"u", 2},
                        {"objective", "x1"},
                        {"constraints", {"xi1 + xi2 - x1"}},
                        {"bounds", {{-10, 10}}},
                        {"start", {0}}};
    ProblemSpec spec = problem_from_json(j);
    BfdsResult r = find_bfds(spec, scenarios_of(2, {{1, 2}, {2, 4}, {3, 1}}));
    CHECK_FALSE(r.certified);
    CHECK_FALSE(r.probe_too_coarse);
    CHECK(r.indices == std::vector<std::size_t>{1});  // only the sum 6 binds
}

TEST_CASE("family json round-trip") {
    SolverConfig cfg;
    SddsFamily family = enumerate_sdds(scalar_chase(), scenarios_of(1, {{1}, {3}, {2}}), cfg);
    SddsFamily back = family_from_json(family_to_json(family));
    CHECK(back.sets == family.sets);
    CHECK(back.r_bar == family.r_bar);
    CHECK(fingerprints_match(back.fingerprint, family.fingerprint));
}

TEST_CASE("fingerprints separate solver setups") {
    ProblemSpec spec = scalar_chase();
    SolverConfig a, b;
    b.eps_sol = 1e-9;
    CHECK(fingerprints_match(fingerprint_of(a, spec), fingerprint_of(a, spec)));
    CHECK_FALSE(fingerprints_match(fingerprint_of(a, spec), fingerprint_of(b, spec)));
}
