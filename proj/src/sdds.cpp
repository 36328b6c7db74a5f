#include "peco/sdds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>

#include "peco/errors.hpp"

namespace peco {

namespace {

using Op = Expression::Op;

// Recognizes xi_j - x_i (lower bound on x_i) and x_i - xi_j (upper bound).
struct BoundForm {
    bool is_lower;            // true: x_i >= xi_j
    std::size_t decision;     // i
    std::size_t uncertainty;  // j
};

bool match_bound_form(const Expression& e, BoundForm& out) {
    const auto& root = e.root();
    if (!root || root->op != Op::Sub) return false;
    const auto& l = root->left;
    const auto& r = root->right;
    if (l->op == Op::VarXi && r->op == Op::VarX) {
        out = {true, r->index, l->index};
        return true;
    }
    if (l->op == Op::VarX && r->op == Op::VarXi) {
        out = {false, l->index, r->index};
        return true;
    }
    return false;
}

BfdsResult bfds_certified(const ScenarioSet& full, const std::vector<BoundForm>& forms) {
    BfdsResult result;
    result.certified = true;
    std::vector<bool> keep(full.size(), false);
    for (const auto& form : forms) {
        std::size_t best = 0;
        std::size_t achievers = 0;
        for (std::size_t s = 0; s < full.size(); ++s) {
            double v = full.scenarios[s][form.uncertainty];
            double b = full.scenarios[best][form.uncertainty];
            bool better = form.is_lower ? v > b : v < b;
            if (better) {
                best = s;
                achievers = 1;
            } else if (v == b) {
                ++achievers;
            }
        }
        keep[best] = true;
        if (achievers > 1) result.minimality_tied = true;
    }
    for (std::size_t s = 0; s < full.size(); ++s)
        if (keep[s]) result.indices.push_back(s);
    return result;
}

// Per-scenario probe mask: bit p set when scenario s excludes probe point p.
std::vector<std::vector<std::uint64_t>> blocked_masks(const ProblemSpec& spec,
                                                      const ScenarioSet& full,
                                                      std::size_t nodes) {
    std::vector<std::vector<double>> probes;
    std::vector<double> x(spec.n);
    std::size_t total = 1;
    for (std::size_t k = 0; k < spec.n; ++k) total *= nodes;
    probes.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (std::size_t k = 0; k < spec.n; ++k) {
            std::size_t idx = rem % nodes;
            rem /= nodes;
            x[k] = spec.lower[k] + (static_cast<double>(idx) * (spec.upper[k] - spec.lower[k])) /
                                       static_cast<double>(nodes - 1);
        }
        probes.push_back(x);
    }

    const std::size_t words = (total + 63) / 64;
    std::vector<std::vector<std::uint64_t>> blocked(full.size(),
                                                    std::vector<std::uint64_t>(words, 0));
    for (std::size_t s = 0; s < full.size(); ++s)
        for (std::size_t p = 0; p < total; ++p)
            for (const auto& c : spec.constraints)
                if (evaluate(c, probes[p], full.scenarios[s]) > 0.0) {
                    blocked[s][p / 64] |= std::uint64_t{1} << (p % 64);
                    break;
                }
    return blocked;
}

std::vector<std::size_t> bfds_greedy(const ProblemSpec& spec, const ScenarioSet& full,
                                     std::size_t nodes) {
    auto blocked = blocked_masks(spec, full, nodes);
    const std::size_t words = blocked.empty() ? 0 : blocked[0].size();
    std::vector<bool> keep(full.size(), true);

    auto union_without = [&](std::size_t skip) {
        std::vector<std::uint64_t> acc(words, 0);
        for (std::size_t s = 0; s < full.size(); ++s) {
            if (!keep[s] || s == skip) continue;
            for (std::size_t w = 0; w < words; ++w) acc[w] |= blocked[s][w];
        }
        return acc;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < full.size(); ++s) {
            if (!keep[s]) continue;
            auto rest = union_without(s);
            bool covered = true;
            for (std::size_t w = 0; w < words && covered; ++w)
                if ((blocked[s][w] & ~rest[w]) != 0) covered = false;
            if (covered) {
                keep[s] = false;
                changed = true;
            }
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < full.size(); ++s)
        if (keep[s]) out.push_back(s);
    return out;
}

std::vector<std::size_t> mask_to_indices(std::uint32_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; mask != 0; ++b, mask >>= 1)
        if (mask & 1) out.push_back(b);
    return out;
}

}  // namespace

SolverFingerprint fingerprint_of(const SolverConfig& cfg, const ProblemSpec& spec) {
    SolverFingerprint fp;
    fp.solver_id = cfg.solver_id;
    fp.start = cfg.start.empty() ? spec.start : cfg.start;
    fp.eps_feas = cfg.eps_feas;
    fp.eps_sol = cfg.eps_sol;
    fp.eps_act = cfg.eps_act;
    return fp;
}

bool fingerprints_match(const SolverFingerprint& a, const SolverFingerprint& b) {
    return a.solver_id == b.solver_id && a.start == b.start && a.eps_feas == b.eps_feas &&
           a.eps_sol == b.eps_sol && a.eps_act == b.eps_act;
}

BfdsResult find_bfds(const ProblemSpec& spec, const ScenarioSet& full, const ProbeSettings& probe) {
    if (spec.n > 3)
        throw Error(ErrorCode::ConfigError, "probe grids are tractable only for n <= 3");
    if (full.size() > 64)
        throw Error(ErrorCode::ConfigError, "boundary reduction limited to 64 scenarios");
    if (full.size() == 0) throw Error(ErrorCode::EmptyData, "no scenarios");

    std::vector<BoundForm> forms(spec.constraint_count());
    bool all_bound_form = true;
    for (std::size_t c = 0; c < spec.constraint_count(); ++c)
        if (!match_bound_form(spec.constraints[c], forms[c])) {
            all_bound_form = false;
            break;
        }
    if (all_bound_form) {
        BfdsResult result = bfds_certified(full, forms);
        std::size_t probe_total = 1;
        for (std::size_t k = 0; k < spec.n; ++k) probe_total *= probe.nodes_per_axis;
        result.probe_points = probe_total;
        return result;
    }

    const std::size_t coarse = probe.nodes_per_axis;
    const std::size_t fine = 2 * probe.nodes_per_axis - 1;
    auto at_coarse = bfds_greedy(spec, full, coarse);
    auto at_fine = bfds_greedy(spec, full, fine);

    BfdsResult result;
    result.indices = at_fine;
    result.certified = false;
    result.probe_too_coarse = at_coarse != at_fine;
    std::size_t probe_total = 1;
    for (std::size_t k = 0; k < spec.n; ++k) probe_total *= fine;
    result.probe_points = probe_total;
    return result;
}

SddsFamily enumerate_sdds(const ProblemSpec& spec, const ScenarioSet& full,
                          const SolverConfig& cfg, std::size_t cutoff) {
    const std::size_t count = full.size();
    if (count == 0) throw Error(ErrorCode::EmptyData, "no scenarios to enumerate over");
    if (count > 15)
        throw Error(ErrorCode::ExactModeTooLarge,
                    "exhaustive enumeration covers at most 15 scenarios, got " +
                        std::to_string(count));

    const std::uint32_t full_mask = (std::uint32_t{1} << count) - 1;
    std::vector<Solution> solutions(full_mask + 1);
    for (std::uint32_t mask = 0; mask <= full_mask; ++mask) {
        ScenarioSet subset;
        subset.dimension = full.dimension;
        subset.kinds = full.kinds;
        for (std::size_t b = 0; b < count; ++b)
            if (mask & (std::uint32_t{1} << b)) {
                subset.scenarios.push_back(full.scenarios[b]);
                subset.counts.push_back(1);
            }
        try {
            solutions[mask] = solve(make_instance(spec, subset), cfg);
        } catch (const Error& e) {
            throw Error(ErrorCode::SolveFailure,
                        "subset mask " + std::to_string(mask) + ": " + e.what());
        }
        if (solutions[mask].status != SolveStatus::Optimal)
            throw Error(ErrorCode::SolveFailure,
                        "subset mask " + std::to_string(mask) + " ended " +
                            solve_status_name(solutions[mask].status));
    }

    const Solution& reference = solutions[full_mask];
    auto reproduces = [&](std::uint32_t mask) {
        return solutions_equal(solutions[mask], reference, cfg.eps_sol);
    };

    std::vector<std::uint32_t> found;
    for (std::uint32_t mask = 1; mask <= full_mask; ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) > cutoff) continue;
        if (!reproduces(mask)) continue;
        bool critical = true;
        for (std::size_t b = 0; b < count && critical; ++b)
            if (mask & (std::uint32_t{1} << b))
                if (reproduces(mask & ~(std::uint32_t{1} << b))) critical = false;
        if (critical) found.push_back(mask);
    }
    std::stable_sort(found.begin(), found.end(), [](std::uint32_t a, std::uint32_t b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });

    SddsFamily family;
    family.fingerprint = fingerprint_of(cfg, spec);
    for (std::uint32_t mask : found) family.sets.push_back(mask_to_indices(mask));
    if (!family.sets.empty()) family.r_bar = r_bar_vector(family);
    return family;
}

std::vector<std::pair<std::vector<std::size_t>, std::size_t>> r_bar_vector(
    const SddsFamily& family) {
    const std::size_t r = family.sets.size();
    if (r == 0) throw Error(ErrorCode::FamilyEmpty, "no determining sets");
    if (r > 20) throw Error(ErrorCode::ConfigError, "union table over 2^R - 1 subsets needs R <= 20");

    // scenario membership per family member, as a bitmask over scenarios
    std::vector<std::uint64_t> member_mask(r, 0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t idx : family.sets[i]) member_mask[i] |= std::uint64_t{1} << idx;

    std::vector<std::pair<std::vector<std::size_t>, std::size_t>> out;
    for (std::uint32_t subset = 1; subset < (std::uint32_t{1} << r); ++subset) {
        std::uint64_t united = 0;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < r; ++i)
            if (subset & (std::uint32_t{1} << i)) {
                united |= member_mask[i];
                members.push_back(i + 1);  // 1-based member labels
            }
        out.emplace_back(std::move(members), static_cast<std::size_t>(std::popcount(united)));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        return a.first < b.first;
    });
    return out;
}

nlohmann::ordered_json family_to_json(const SddsFamily& family) {
    nlohmann::ordered_json j;
    j["sets"] = family.sets;
    auto r_bar = nlohmann::ordered_json::array();
    for (const auto& [members, united] : family.r_bar)
        r_bar.push_back({{"members", members}, {"union", united}});
    j["r_bar"] = r_bar;
    j["fingerprint"] = {{"solver_id", family.fingerprint.solver_id},
                        {"start", family.fingerprint.start},
                        {"eps_feas", family.fingerprint.eps_feas},
                        {"eps_sol", family.fingerprint.eps_sol},
                        {"eps_act", family.fingerprint.eps_act}};
    return j;
}

SddsFamily family_from_json(const nlohmann::json& j) {
    SddsFamily family;
    if (!j.contains("sets") || !j["sets"].is_array())
        throw Error(ErrorCode::ConfigError, "family JSON needs a 'sets' array");
    for (const auto& s : j["sets"]) {
        std::vector<std::size_t> indices = s.get<std::vector<std::size_t>>();
        std::sort(indices.begin(), indices.end());
        family.sets.push_back(std::move(indices));
    }
    if (j.contains("fingerprint")) {
        const auto& fp = j["fingerprint"];
        family.fingerprint.solver_id = fp.value("solver_id", std::string());
        if (fp.contains("start"))
            family.fingerprint.start = fp["start"].get<std::vector<double>>();
        family.fingerprint.eps_feas = fp.value("eps_feas", 0.0);
        family.fingerprint.eps_sol = fp.value("eps_sol", 0.0);
        family.fingerprint.eps_act = fp.value("eps_act", 0.0);
    }
    if (!family.sets.empty()) family.r_bar = r_bar_vector(family);
    return family;
}

SddsFamily load_family(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigError, "bad JSON in " + path + ": " + e.what());
    }
    return family_from_json(j);
}

}  // namespace peco
