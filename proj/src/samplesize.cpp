#include "peco/samplesize.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

#include "peco/errors.hpp"

namespace peco {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// C(a, b) with zero extension: 0 whenever b < 0 or b > a.
cpp_int binomial(long long a, long long b) {
    if (b < 0 || b > a) return 0;
    if (b > a - b) b = a - b;
    cpp_int num = 1, den = 1;
    for (long long i = 1; i <= b; ++i) {
        num *= a - b + i;
        den *= i;
    }
    return num / den;
}

}  // namespace

RhoInput rho_input_from_family(const SddsFamily& family, std::size_t d_underlying_size) {
    if (family.sets.empty()) throw Error(ErrorCode::FamilyEmpty, "no determining sets");
    RhoInput input;
    input.d_underlying_size = d_underlying_size;
    auto table = family.r_bar.empty() ? r_bar_vector(family) : family.r_bar;
    input.entries.reserve(table.size());
    for (const auto& [members, united] : table) input.entries.emplace_back(members.size(), united);
    return input;
}

void validate_rho_input(const RhoInput& input) {
    if (input.d_underlying_size == 0)
        throw Error(ErrorCode::AssumptionViolated, "underlying set is empty");
    const std::size_t count = input.entries.size();
    if (count == 0) throw Error(ErrorCode::AssumptionViolated, "union table is empty");
    std::size_t r = 0;
    while ((std::size_t{1} << r) - 1 < count) ++r;
    if ((std::size_t{1} << r) - 1 != count)
        throw Error(ErrorCode::AssumptionViolated,
                    "union table has " + std::to_string(count) +
                        " entries, expected 2^R - 1 for some R");
    std::vector<std::size_t> per_size(r + 1, 0);
    for (const auto& [j_size, united] : input.entries) {
        if (j_size < 1 || j_size > r)
            throw Error(ErrorCode::AssumptionViolated,
                        "subset cardinality " + std::to_string(j_size) + " out of range");
        if (united < 1 || united > input.d_underlying_size)
            throw Error(ErrorCode::AssumptionViolated,
                        "union size " + std::to_string(united) + " not in [1, " +
                            std::to_string(input.d_underlying_size) + "]");
        ++per_size[j_size];
    }
    for (std::size_t s = 1; s <= r; ++s) {
        cpp_int expected = binomial(static_cast<long long>(r), static_cast<long long>(s));
        if (cpp_int(per_size[s]) != expected)
            throw Error(ErrorCode::AssumptionViolated,
                        "expected " + expected.str() + " subsets of cardinality " +
                            std::to_string(s) + ", found " + std::to_string(per_size[s]));
    }
}

double rho(const RhoInput& input, std::size_t z) {
    validate_rho_input(input);
    const auto d = static_cast<long long>(input.d_underlying_size);
    const auto zz = static_cast<long long>(z);
    if (zz > d)
        throw Error(ErrorCode::ZTooLarge,
                    "z = " + std::to_string(z) + " exceeds " + std::to_string(d) + " points");
    cpp_int sum = 0;
    for (const auto& [j_size, united] : input.entries) {
        cpp_int term = binomial(d - static_cast<long long>(united),
                                zz - static_cast<long long>(united));
        if (j_size % 2 == 1)
            sum += term;
        else
            sum -= term;
    }
    cpp_rational value(sum, binomial(d, zz));
    return value.convert_to<double>();
}

std::vector<std::pair<std::size_t, double>> rho_table(const RhoInput& input) {
    std::vector<std::pair<std::size_t, double>> table;
    table.reserve(input.d_underlying_size);
    for (std::size_t z = 1; z <= input.d_underlying_size; ++z) table.emplace_back(z, rho(input, z));
    return table;
}

std::size_t min_z(const RhoInput& input, double target, bool* not_monotone) {
    if (not_monotone) *not_monotone = false;
    double prev = -1.0;
    for (std::size_t z = 1; z <= input.d_underlying_size; ++z) {
        double value = rho(input, z);
        if (not_monotone && value < prev) *not_monotone = true;
        prev = value;
        if (value >= target) return z;
    }
    throw Error(ErrorCode::NoFeasibleZ,
                "no z up to " + std::to_string(input.d_underlying_size) +
                    " reaches coverage " + std::to_string(target));
}

std::vector<std::size_t> draw_d_emb(std::size_t d_underlying_size, std::size_t z,
                                    std::uint64_t seed) {
    if (z > d_underlying_size)
        throw Error(ErrorCode::ZTooLarge, "z = " + std::to_string(z) + " exceeds " +
                                              std::to_string(d_underlying_size) + " points");
    SplitMix64 rng(seed);
    auto drawn = sample_without_replacement(d_underlying_size, z, rng);
    std::sort(drawn.begin(), drawn.end());
    return drawn;
}

double monte_carlo_rho(const SddsFamily& family, std::size_t d_underlying_size, std::size_t z,
                       std::size_t trials, std::uint64_t seed) {
    if (family.sets.empty()) throw Error(ErrorCode::FamilyEmpty, "no determining sets");
    if (z > d_underlying_size)
        throw Error(ErrorCode::ZTooLarge, "z = " + std::to_string(z) + " exceeds " +
                                              std::to_string(d_underlying_size) + " points");
    if (trials == 0) throw Error(ErrorCode::ConfigError, "trials must be positive");
    for (const auto& set : family.sets)
        for (std::size_t idx : set)
            if (idx >= d_underlying_size)
                throw Error(ErrorCode::IndexOutOfRange,
                            "family references point " + std::to_string(idx) +
                                " outside the underlying set");

    std::vector<bool> drawn(d_underlying_size);

    constexpr std::size_t kBatch = 1024;
    std::size_t hits = 0;
    for (std::size_t done = 0, batch = 0; done < trials; ++batch) {
        SplitMix64 rng(derive_seed(seed, batch));
        const std::size_t batch_trials = std::min(kBatch, trials - done);
        for (std::size_t t = 0; t < batch_trials; ++t) {
            auto sample = sample_without_replacement(d_underlying_size, z, rng);
            std::fill(drawn.begin(), drawn.end(), false);
            for (std::size_t idx : sample) drawn[idx] = true;
            for (const auto& set : family.sets) {
                bool contained = true;
                for (std::size_t idx : set)
                    if (!drawn[idx]) {
                        contained = false;
                        break;
                    }
                if (contained) {
                    ++hits;
                    break;
                }
            }
        }
        done += batch_trials;
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

SampleSizePlan make_plan(const RhoInput& input, double target, std::uint64_t seed) {
    if (!(target > 0.0 && target <= 1.0))
        throw Error(ErrorCode::ConfigError, "coverage target must lie in (0, 1]");
    SampleSizePlan plan;
    plan.d_alpha_size = input.d_underlying_size;
    plan.r_bar = input.entries;
    plan.target = target;
    plan.seed = seed;
    plan.z_min = min_z(input, target);
    plan.rho_table = rho_table(input);
    return plan;
}

nlohmann::ordered_json plan_to_json(const SampleSizePlan& plan) {
    nlohmann::ordered_json j;
    j["d_alpha_size"] = plan.d_alpha_size;
    auto r_bar = nlohmann::ordered_json::array();
    for (const auto& [j_size, united] : plan.r_bar) r_bar.push_back({j_size, united});
    j["r_bar"] = r_bar;
    j["target"] = plan.target;
    j["z_min"] = plan.z_min;
    j["seed"] = plan.seed;
    auto table = nlohmann::ordered_json::array();
    for (const auto& [z, value] : plan.rho_table) table.push_back({z, value});
    j["rho_table"] = table;
    j["prng"] = std::string(kPrngName);
    return j;
}

SampleSizePlan plan_from_json(const nlohmann::json& j) {
    SampleSizePlan plan;
    try {
        plan.d_alpha_size = j.at("d_alpha_size").get<std::size_t>();
        for (const auto& pair : j.at("r_bar"))
            plan.r_bar.emplace_back(pair.at(0).get<std::size_t>(), pair.at(1).get<std::size_t>());
        plan.target = j.at("target").get<double>();
        plan.z_min = j.at("z_min").get<std::size_t>();
        plan.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("rho_table"))
            for (const auto& pair : j["rho_table"])
                plan.rho_table.emplace_back(pair.at(0).get<std::size_t>(),
                                            pair.at(1).get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("bad plan JSON: ") + e.what());
    }
    return plan;
}

}  // namespace peco
