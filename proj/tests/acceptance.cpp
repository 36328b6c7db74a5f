// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero when any criterion fails. Tolerances and
// time limits are pinned here on purpose.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "peco/data.hpp"
#include "peco/density.hpp"
#include "peco/dep.hpp"
#include "peco/errors.hpp"
#include "peco/expr.hpp"
#include "peco/problem.hpp"
#include "peco/rng.hpp"
#include "peco/samplesize.hpp"
#include "peco/sdds.hpp"

using namespace peco;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

namespace {

std::string g_note;  // optional margin report, appended to the PASS line

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::runtime_error(msg);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

cpp_int binom(long long a, long long b) {
    if (b < 0 || b > a) return 0;
    if (b > a - b) b = a - b;
    cpp_int r = 1;
    for (long long i = 1; i <= b; ++i) {
        r *= a - i + 1;
        r /= i;
    }
    return r;
}

ScenarioSet subset_of(const ScenarioSet& full, const std::vector<std::size_t>& idx) {
    ScenarioSet sub;
    sub.dimension = full.dimension;
    sub.kinds = full.kinds;
    for (std::size_t i : idx) {
        sub.scenarios.push_back(full.scenarios[i]);
        sub.counts.push_back(1);
    }
    return sub;
}

bool multiset_subset(std::vector<DataPoint> small, std::vector<DataPoint> big) {
    std::sort(small.begin(), small.end());
    std::sort(big.begin(), big.end());
    std::size_t j = 0;
    for (const auto& p : small) {
        while (j < big.size() && big[j] < p) ++j;
        if (j == big.size() || big[j] != p) return false;
        ++j;
    }
    return true;
}

ProblemSpec chase_problem() {
    return problem_from_json({{"n", 1},
                              {"u", 1},
                              {"objective", "x1"},
                              {"constraints", {"xi1 - x1"}},
                              {"bounds", {{-10, 10}}},
                              {"start", {0}}});
}

ProblemSpec corner_problem() {
    return problem_from_json({{"n", 2},
                              {"u", 2},
                              {"objective", "x1 + x2"},
                              {"constraints", {"xi1 - x1", "xi2 - x2"}},
                              {"bounds", {{-10, 10}, {-10, 10}}},
                              {"start", {0, 0}}});
}

// ---------------------------------------------------------------- criteria

void criterion_vicinity_walkthrough() {
    DataSet d = load_csv("fixtures/grid_sample.csv");
    const double alpha = 0.1, eta = 0.5;
    double p12 = empirical_probability(d, DataPoint{1, 2}, eta, VicinityNorm::L2);
    require(p12 == 0.09, "probability of (1,2) is " + fmt(p12) + ", want 0.09");
    DataSet kept = build_d_alpha(d, alpha, eta, VicinityNorm::L2);
    require(kept.size() == 85, "kept " + std::to_string(kept.size()) + " points, want 85");
    ScenarioSet u = underlying_set(kept);
    std::vector<DataPoint> want{{2, 1}, {2, 2}, {2, 3}, {3, 2}};
    std::vector<DataPoint> got = u.scenarios;
    std::sort(got.begin(), got.end());
    require(got == want, "distinct kept points differ from the documented four");
}

void criterion_coverage_vs_monte_carlo() {
    struct Case {
        std::vector<std::vector<std::size_t>> sets;
        std::size_t d;
    };
    std::vector<Case> cases{
        {{{0, 1, 2}}, 10},
        {{{0}, {1}}, 10},
        {{{1, 2, 3}, {1, 3, 4}}, 12},
        {{{0, 1}, {1, 2}, {2, 3}}, 15},
        {{{5}, {1, 2}, {0, 2, 3, 4}}, 9},
    };
    double worst = 0.0;
    std::uint64_t stream = 0;
    for (const auto& c : cases) {
        SddsFamily fam;
        fam.sets = c.sets;
        RhoInput input = rho_input_from_family(fam, c.d);
        for (std::size_t z = 1; z <= c.d; ++z) {
            double exact = rho(input, z);
            double mc = monte_carlo_rho(fam, c.d, z, 100000, derive_seed(777001, stream++));
            double gap = std::abs(mc - exact);
            worst = std::max(worst, gap);
            require(gap <= 0.01, "family " + std::to_string(&c - cases.data()) + " z=" +
                                     std::to_string(z) + " gap " + fmt(gap));
        }
    }
    g_note = "worst gap " + fmt(worst);
}

void criterion_recovery_frequency() {
    SolverConfig cfg;
    cfg.solver_id = kSolverGridOracle;
    cfg.grid_nodes = 401;

    struct Case {
        ProblemSpec spec;
        ScenarioSet full;
    };
    std::vector<Case> cases;
    cases.push_back({chase_problem(),
                     underlying_set(make_dataset(1, {{3}, {7}, {1}, {5}, {2}, {8}, {4}, {6}}))});
    cases.push_back({corner_problem(),
                     underlying_set(make_dataset(2, {{7, 1},
                                                     {2, 6},
                                                     {1, 1},
                                                     {3, 2},
                                                     {5, 3},
                                                     {0, 4},
                                                     {4, 0},
                                                     {6, 2}}))});
    cases.push_back({load_problem("fixtures/threewell_problem.json"),
                     underlying_set(load_csv("fixtures/threewell_scenarios.csv"))});

    double worst = 0.0;
    for (std::size_t pi = 0; pi < cases.size(); ++pi) {
        const ProblemSpec& spec = cases[pi].spec;
        const ScenarioSet& full = cases[pi].full;
        SddsFamily fam = enumerate_sdds(spec, full, cfg);
        require(!fam.sets.empty(), "problem " + std::to_string(pi) + ": empty family");
        RhoInput input = rho_input_from_family(fam, full.size());
        Solution ref = solve(make_instance(spec, full), cfg);
        require(ref.status == SolveStatus::Optimal,
                "problem " + std::to_string(pi) + ": full solve not optimal");

        std::size_t z_lo = full.size();
        for (const auto& s : fam.sets) z_lo = std::min(z_lo, s.size());
        std::size_t z_hi = full.size();
        std::size_t z_mid = (z_lo + z_hi) / 2;
        for (std::size_t z : {z_lo, z_mid, z_hi}) {
            double exact = rho(input, z);
            SplitMix64 rng(derive_seed(424242, pi * 64 + z));
            std::unordered_map<std::uint64_t, bool> cache;
            const int draws = 2000;
            int hits = 0;
            for (int t = 0; t < draws; ++t) {
                auto idx = sample_without_replacement(full.size(), z, rng);
                std::uint64_t mask = 0;
                for (std::size_t i : idx) mask |= std::uint64_t{1} << i;
                auto it = cache.find(mask);
                if (it == cache.end()) {
                    Solution s = solve(make_instance(spec, subset_of(full, idx)), cfg);
                    it = cache.emplace(mask, solutions_equal(s, ref, cfg.eps_sol)).first;
                }
                hits += it->second ? 1 : 0;
            }
            double freq = static_cast<double>(hits) / draws;
            double gap = std::abs(freq - exact);
            worst = std::max(worst, gap);
            require(gap <= 0.03, "problem " + std::to_string(pi) + " z=" + std::to_string(z) +
                                     ": frequency " + fmt(freq) + " vs " + fmt(exact));
        }
    }
    g_note = "worst gap " + fmt(worst);
}

void criterion_threshold_from_mass_target() {
    ProductDensity normal = load_density("fixtures/std_normal.json");
    double v = alpha_from_beta(normal, 0.05);
    const double q975 = normal_quantile(0.975);
    double oracle = std::exp(-0.5 * q975 * q975) / std::sqrt(2.0 * 3.14159265358979323846);
    require(std::abs(v - oracle) <= 1e-3,
            "threshold " + fmt(v) + " vs analytic " + fmt(oracle));
    require(std::abs(v - 0.05845) <= 1e-3, "threshold " + fmt(v) + " vs 0.05845");
    g_note = "gap " + fmt(std::abs(v - oracle));
}

void criterion_monotonicity() {
    SplitMix64 rng(515001);
    for (int t = 0; t < 100; ++t) {
        std::size_t dim = 1 + rng.uniform_below(2);
        std::size_t count = 30 + rng.uniform_below(51);
        std::vector<DataPoint> pts(count, DataPoint(dim));
        for (auto& p : pts)
            for (auto& c : p) c = static_cast<double>(rng.uniform_below(5));
        DataSet d = make_dataset(dim, pts);
        double eta = 0.6 + rng.uniform() * 1.2;
        double a2 = 0.02 + rng.uniform() * 0.5;
        double a1 = a2 + rng.uniform() * (0.95 - a2);
        VicinityNorm norm = (t % 2 != 0) ? VicinityNorm::LInf : VicinityNorm::L2;
        DataSet tight = build_d_alpha(d, a1, eta, norm);
        DataSet loose = build_d_alpha(d, a2, eta, norm);
        require(multiset_subset(tight.points, loose.points),
                "round " + std::to_string(t) + ": raising the cutoff admitted a new point");
    }

    ProductDensity bimodal = load_density("fixtures/bimodal_density.json");
    auto box1 = factor_box(bimodal.factors[0]);
    auto box2 = factor_box(bimodal.factors[1]);
    int members = 0;
    for (int t = 0; t < 100; ++t) {
        double a2 = rng.uniform() * 0.030;
        double a1 = a2 + rng.uniform() * (0.036 - a2);
        std::vector<double> p{box1.first + rng.uniform() * (box1.second - box1.first),
                              box2.first + rng.uniform() * (box2.second - box2.first)};
        bool in_tight = xi_alpha_member({bimodal, a1}, p);
        bool in_loose = xi_alpha_member({bimodal, a2}, p);
        require(!in_tight || in_loose, "probe " + std::to_string(t) + ": regions not nested");
        members += in_loose ? 1 : 0;
    }
    require(members > 0, "no probe landed inside any region");
    g_note = std::to_string(members) + "/100 probes inside the loose region";
}

void criterion_duplicate_collapse() {
    SplitMix64 rng(660001);
    SolverConfig penalty;
    SolverConfig grid;
    grid.solver_id = kSolverGridOracle;
    grid.grid_nodes = 401;
    for (int t = 0; t < 20; ++t) {
        std::size_t dim = 1 + rng.uniform_below(2);
        ProblemSpec spec = (dim == 1) ? chase_problem() : corner_problem();
        std::size_t count = 8 + rng.uniform_below(9);
        std::vector<DataPoint> pts(count, DataPoint(dim));
        for (auto& p : pts)
            for (auto& c : p) c = static_cast<double>(rng.uniform_below(4));
        pts.push_back(pts.front());  // at least one duplicate, always
        DataSet raw = make_dataset(dim, pts);
        ScenarioSet uniq = underlying_set(raw);
        DataSet dedup = make_dataset(dim, uniq.scenarios);
        require(dedup.size() < raw.size(), "round " + std::to_string(t) + ": no duplicates drawn");

        const SolverConfig& cfg = (t % 2 != 0) ? grid : penalty;
        Solution a = solve(build_dep(spec, raw), cfg);
        Solution b = solve(build_dep(spec, dedup), cfg);
        require(solution_to_json(a, cfg).dump() == solution_to_json(b, cfg).dump(),
                "round " + std::to_string(t) + ": collapsed instance solved differently");
    }
}

void criterion_repeat_determinism() {
    SolverConfig penalty;
    SolverConfig grid;
    grid.solver_id = kSolverGridOracle;
    grid.grid_nodes = 401;

    struct Case {
        ProblemSpec spec;
        ScenarioSet emb;
    };
    std::vector<Case> cases;
    cases.push_back({chase_problem(),
                     underlying_set(make_dataset(1, {{3}, {7}, {1}, {5}, {2}, {8}, {4}, {6}}))});
    cases.push_back({corner_problem(), underlying_set(make_dataset(2, {{1, 2}, {3, 1}, {2, 2}}))});
    cases.push_back({load_problem("fixtures/threewell_problem.json"),
                     underlying_set(load_csv("fixtures/threewell_scenarios.csv"))});
    cases.push_back({chase_problem(), underlying_set(make_dataset(1, {{20}}))});  // infeasible

    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        for (const SolverConfig& cfg : {penalty, grid}) {
            DepInstance inst = make_instance(cases[ci].spec, cases[ci].emb);
            std::string first = solution_to_json(solve(inst, cfg), cfg).dump();
            for (int rep = 1; rep < 3; ++rep) {
                std::string again = solution_to_json(solve(inst, cfg), cfg).dump();
                require(again == first, "case " + std::to_string(ci) + " (" + cfg.solver_id +
                                            "): repeat " + std::to_string(rep) + " differs");
            }
        }
    }
}

// Random 2-D instances over half-plane scenarios inside a box, built so the
// exact optimum is known and comfortably non-degenerate.
struct GenLine {
    double a1, a2, b;  // a1*x + a2*y <= b
};

constexpr double kGenLo = -1.5, kGenHi = 1.5;

std::vector<GenLine> with_box(const std::vector<GenLine>& scen) {
    std::vector<GenLine> all = scen;
    all.push_back({1, 0, kGenHi});
    all.push_back({-1, 0, -kGenLo});
    all.push_back({0, 1, kGenHi});
    all.push_back({0, -1, -kGenLo});
    return all;
}

bool gen_feasible(const std::vector<GenLine>& scen, double x, double y) {
    if (x < kGenLo - 1e-9 || x > kGenHi + 1e-9) return false;
    if (y < kGenLo - 1e-9 || y > kGenHi + 1e-9) return false;
    for (const auto& l : scen)
        if (l.a1 * x + l.a2 * y > l.b + 1e-9) return false;
    return true;
}

bool gen_intersect(const GenLine& p, const GenLine& q, double& x, double& y) {
    double det = p.a1 * q.a2 - p.a2 * q.a1;
    if (std::abs(det) < 1e-12) return false;
    x = (p.b * q.a2 - q.b * p.a2) / det;
    y = (p.a1 * q.b - q.a1 * p.b) / det;
    return true;
}

struct GenInstance {
    std::vector<GenLine> lines;
    bool quadratic;
    double t1 = 0, t2 = 0;  // quadratic target
    double c1 = 0, c2 = 0;  // linear costs
    double x1 = 0, x2 = 0;  // exact optimum
};

bool gen_try(SplitMix64& rng, bool quadratic, GenInstance& out) {
    std::vector<GenLine> scen(5);
    for (auto& l : scen) {
        l.a1 = 0.4 + rng.uniform();
        l.a2 = 0.4 + rng.uniform();
        l.b = 0.25 + 0.65 * rng.uniform();
    }
    std::vector<GenLine> all = with_box(scen);

    GenInstance inst;
    inst.lines = scen;
    inst.quadratic = quadratic;

    std::vector<std::pair<double, double>> candidates;
    if (quadratic) {
        const GenLine& l = scen[rng.uniform_below(5)];
        double tpar = -0.5 + rng.uniform();
        double off = 0.1 + 0.2 * rng.uniform();
        double h = std::hypot(l.a1, l.a2);
        double px = l.b / (l.a1 + l.a2), py = px;
        inst.t1 = px + off * l.a1 / h - tpar * 0.5 * l.a2 / h;
        inst.t2 = py + off * l.a2 / h + tpar * 0.5 * l.a1 / h;
        candidates.emplace_back(inst.t1, inst.t2);
        for (const auto& m : all) {
            double nn = m.a1 * m.a1 + m.a2 * m.a2;
            double r = (m.a1 * inst.t1 + m.a2 * inst.t2 - m.b) / nn;
            candidates.emplace_back(inst.t1 - r * m.a1, inst.t2 - r * m.a2);
        }
    } else {
        inst.c1 = 0.3 + 0.9 * rng.uniform();
        inst.c2 = 0.3 + 0.9 * rng.uniform();
    }
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            double x, y;
            if (gen_intersect(all[i], all[j], x, y)) candidates.emplace_back(x, y);
        }

    auto objective = [&](double x, double y) {
        if (quadratic) {
            double dx = x - inst.t1, dy = y - inst.t2;
            return dx * dx + dy * dy;
        }
        return -(inst.c1 * x + inst.c2 * y);
    };
    bool found = false;
    double best = 0;
    for (const auto& [x, y] : candidates) {
        if (!gen_feasible(scen, x, y)) continue;
        double v = objective(x, y);
        if (!found || v < best) {
            found = true;
            best = v;
            inst.x1 = x;
            inst.x2 = y;
        }
    }
    if (!found) return false;

    // non-degeneracy filters
    std::vector<std::size_t> active_scen, active_all;
    for (std::size_t i = 0; i < scen.size(); ++i)
        if (std::abs(scen[i].a1 * inst.x1 + scen[i].a2 * inst.x2 - scen[i].b) < 1e-7)
            active_scen.push_back(i);
    for (std::size_t i = 0; i < all.size(); ++i)
        if (std::abs(all[i].a1 * inst.x1 + all[i].a2 * inst.x2 - all[i].b) < 1e-7)
            active_all.push_back(i);
    for (std::size_t i = 0; i < scen.size(); ++i) {
        bool is_active = std::find(active_scen.begin(), active_scen.end(), i) != active_scen.end();
        if (is_active) continue;
        double slack = (scen[i].b - scen[i].a1 * inst.x1 - scen[i].a2 * inst.x2) /
                       std::hypot(scen[i].a1, scen[i].a2);
        if (slack < 0.15) return false;
    }
    if (quadratic) {
        if (active_scen.size() != 1 || active_all.size() != 1) return false;
        double box_gap = std::min(std::min(inst.x1 - kGenLo, kGenHi - inst.x1),
                                  std::min(inst.x2 - kGenLo, kGenHi - inst.x2));
        if (box_gap < 0.15) return false;
        if (std::hypot(inst.x1 - inst.t1, inst.x2 - inst.t2) < 0.03) return false;
    } else {
        if (active_all.size() != 2) return false;
        double ang0 = std::atan2(all[active_all[0]].a2, all[active_all[0]].a1);
        double ang1 = std::atan2(all[active_all[1]].a2, all[active_all[1]].a1);
        double d = std::fmod(std::abs(ang0 - ang1), 3.14159265358979323846);
        double between = std::min(d, 3.14159265358979323846 - d);
        if (between < 30.0 * 3.14159265358979323846 / 180.0) return false;
        for (std::size_t i : active_all) {
            if (i >= scen.size()) continue;  // box edges may sit on an axis
            double slope_angle = std::atan(all[i].a1 / all[i].a2);
            double deg = slope_angle * 180.0 / 3.14159265358979323846;
            if (deg < 20.0 || deg > 70.0) return false;
        }
    }
    out = inst;
    return true;
}

void criterion_solver_vs_oracle() {
    SplitMix64 rng(880001);
    SolverConfig penalty;
    SolverConfig grid;
    grid.solver_id = kSolverGridOracle;

    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        GenInstance inst;
        int guard = 0;
        while (!gen_try(rng, i % 2 != 0, inst))
            require(++guard < 500, "instance generator stalled at round " + std::to_string(i));

        std::string obj;
        if (inst.quadratic)
            obj = "(x1 - (" + format_double(inst.t1) + "))^2 + (x2 - (" + format_double(inst.t2) +
                  "))^2";
        else
            obj = "-((" + format_double(inst.c1) + ")*x1 + (" + format_double(inst.c2) + ")*x2)";
        ProblemSpec spec = problem_from_json(
            {{"n", 2},
             {"u", 3},
             {"objective", obj},
             {"constraints", {"xi1*x1 + xi2*x2 - xi3"}},
             {"bounds", {{kGenLo, kGenHi}, {kGenLo, kGenHi}}},
             {"start", {0, 0}}});
        std::vector<DataPoint> rows;
        for (const auto& l : inst.lines) rows.push_back({l.a1, l.a2, l.b});
        ScenarioSet emb = underlying_set(make_dataset(3, rows));

        Solution pen = solve(make_instance(spec, emb), penalty);
        Solution ora = solve(make_instance(spec, emb), grid);
        require(pen.status == SolveStatus::Optimal,
                "round " + std::to_string(i) + ": penalty status not optimal");
        require(ora.status == SolveStatus::Optimal,
                "round " + std::to_string(i) + ": oracle status not optimal");
        double gap = std::abs(pen.objective_value - ora.objective_value);
        worst = std::max(worst, gap);
        require(gap <= 1e-3, "round " + std::to_string(i) + (inst.quadratic ? " (quadratic)" : " (linear)") +
                                 ": objective gap " + fmt(gap));
    }
    g_note = "worst gap " + fmt(worst);
}

std::string random_expression(SplitMix64& rng, int depth) {
    if (depth == 0 || rng.uniform() < 0.25) {
        switch (rng.uniform_below(3)) {
            case 0: return "x1";
            case 1: return "x2";
            default: {
                double c = std::round((-2.0 + 4.0 * rng.uniform()) * 100.0) / 100.0;
                return "(" + format_double(c) + ")";
            }
        }
    }
    std::string a = random_expression(rng, depth - 1);
    switch (rng.uniform_below(9)) {
        case 0: return "(" + a + " + " + random_expression(rng, depth - 1) + ")";
        case 1: return "(" + a + " - " + random_expression(rng, depth - 1) + ")";
        case 2: return "(" + a + ") * (" + random_expression(rng, depth - 1) + ")";
        case 3: return "(" + a + ") / ((" + random_expression(rng, depth - 1) + ")^2 + 1)";
        case 4: return "(" + a + ")^" + std::to_string(rng.uniform_below(4));
        case 5: return "exp(0.5 * (" + a + "))";
        case 6: return "log((" + a + ")^2 + 1)";
        case 7: return "sin(" + a + ")";
        default: return "cos(" + a + ")";
    }
}

void criterion_gradient_check() {
    SplitMix64 rng(990001);
    const double h = 1e-5;
    int accepted = 0, tries = 0;
    double worst = 0.0;
    while (accepted < 50) {
        require(++tries < 5000, "expression generator stalled");
        std::string src = random_expression(rng, 3);
        std::vector<double> x{-1.5 + 3.0 * rng.uniform(), -1.5 + 3.0 * rng.uniform()};
        Expression e;
        double f;
        std::vector<double> grad;
        try {
            e = parse(src, 2, 0);
            f = evaluate(e, x, {});
            grad = gradient(e, x, {});
        } catch (const Error&) {
            continue;  // e.g. 0^0 or an overflow path; draw again
        }
        if (!std::isfinite(f) || std::abs(f) > 1e4) continue;
        if (!std::isfinite(grad[0]) || !std::isfinite(grad[1])) continue;
        if (std::abs(grad[0]) > 1e4 || std::abs(grad[1]) > 1e4) continue;
        ++accepted;

        for (std::size_t i = 0; i < 2; ++i) {
            std::vector<double> hi = x, lo = x;
            hi[i] += h;
            lo[i] -= h;
            double fd = (evaluate(e, hi, {}) - evaluate(e, lo, {})) / (2 * h);
            double scale = std::max({1.0, std::abs(grad[i]), std::abs(fd)});
            double err = std::abs(grad[i] - fd) / scale;
            worst = std::max(worst, err);
            require(err <= 1e-6, "expression " + std::to_string(accepted) + " component " +
                                     std::to_string(i + 1) + ": error " + fmt(err) + " in " + src);
        }
    }
    g_note = "worst error " + fmt(worst);
}

void criterion_exact_rational_coverage() {
    for (auto [d, r] : {std::pair<long long, long long>{10, 3}, {25, 8}, {40, 13}}) {
        RhoInput input;
        input.d_underlying_size = static_cast<std::size_t>(d);
        input.entries = {{1, static_cast<std::size_t>(r)}};
        for (long long z = 1; z <= d; ++z) {
            cpp_rational closed(binom(d - r, z - r), binom(d, z));
            double want = closed.convert_to<double>();
            double got = rho(input, static_cast<std::size_t>(z));
            require(got == want, "d=" + std::to_string(d) + " z=" + std::to_string(z) +
                                     ": " + fmt(got) + " != " + fmt(want));
        }
    }
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* label;
        double limit_seconds;  // 0: untimed
        std::function<void()> body;
    };
    const std::vector<Criterion> criteria{
        {1, "vicinity filter reproduces the documented walkthrough", 1.0,
         criterion_vicinity_walkthrough},
        {2, "exact coverage matches Monte Carlo on hand-built families", 30.0,
         criterion_coverage_vs_monte_carlo},
        {3, "subset recovery frequency matches exact coverage end to end", 300.0,
         criterion_recovery_frequency},
        {4, "density threshold from a mass target matches the analytic value", 0,
         criterion_threshold_from_mass_target},
        {5, "tightening the cutoff never admits points or grows regions", 0,
         criterion_monotonicity},
        {6, "duplicate scenarios collapse without changing the solution", 0,
         criterion_duplicate_collapse},
        {7, "repeated solves are bit-identical", 0, criterion_repeat_determinism},
        {8, "penalty solver agrees with the grid oracle on random instances", 0,
         criterion_solver_vs_oracle},
        {9, "expression gradients match central finite differences", 0,
         criterion_gradient_check},
        {10, "single-set coverage equals the closed form in exact rationals", 0,
         criterion_exact_rational_coverage},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        g_note.clear();
        std::string error;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.body();
        } catch (const std::exception& e) {
            error = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (error.empty() && c.limit_seconds > 0 && secs > c.limit_seconds)
            error = "took " + fmt(secs) + " s, limit " + fmt(c.limit_seconds) + " s";
        if (error.empty()) {
            std::printf("criterion %2d: PASS  (%7.2f s)  %s%s%s\n", c.id, secs, c.label,
                        g_note.empty() ? "" : "; ", g_note.c_str());
        } else {
            ++failures;
            std::printf("criterion %2d: FAIL  (%7.2f s)  %s; %s\n", c.id, secs, c.label,
                        error.c_str());
        }
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
