#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "peco/rng.hpp"
#include "peco/sdds.hpp"

namespace peco {

// Union-size table for a determining-set family: one entry per nonempty
// subset of the family, carrying the subset cardinality and the number of
// distinct scenarios covered by its union. Only those two numbers enter the
// coverage probability, so plans can be built from stored tables without the
// sets themselves.
struct RhoInput {
    std::size_t d_underlying_size = 0;
    // (subset cardinality, union size), ordered by (cardinality, member order)
    std::vector<std::pair<std::size_t, std::size_t>> entries;
};

RhoInput rho_input_from_family(const SddsFamily& family, std::size_t d_underlying_size);

// Throws AssumptionViolated unless the entry count is 2^R - 1, per-cardinality
// counts match binomial coefficients, and every union size lies in [1, D].
void validate_rho_input(const RhoInput& input);

// Probability that a uniform z-subset of the underlying points contains at
// least one determining set. Exact over big rationals; returned as double.
double rho(const RhoInput& input, std::size_t z);

// rho(z) for z = 1..d_underlying_size.
std::vector<std::pair<std::size_t, double>> rho_table(const RhoInput& input);

// Smallest z with rho(z) >= target; throws NoFeasibleZ when even the full set
// falls short. not_monotone reports a decrease found during the scan.
std::size_t min_z(const RhoInput& input, double target, bool* not_monotone = nullptr);

// z distinct indices into 0..d_underlying_size-1, sorted ascending.
// Throws ZTooLarge when z exceeds the underlying size.
std::vector<std::size_t> draw_d_emb(std::size_t d_underlying_size, std::size_t z,
                                    std::uint64_t seed);

// Empirical estimate of rho(z): fraction of uniform z-subset draws containing
// at least one family set. Draws run in fixed batches of 1024 trials, each
// batch seeded by derive_seed(seed, batch), so the estimate is independent of
// how trials are scheduled.
double monte_carlo_rho(const SddsFamily& family, std::size_t d_underlying_size, std::size_t z,
                       std::size_t trials, std::uint64_t seed);

struct SampleSizePlan {
    std::size_t d_alpha_size = 0;
    std::vector<std::pair<std::size_t, std::size_t>> r_bar;  // (|J|, union) pairs
    double target = 0.0;
    std::size_t z_min = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::size_t, double>> rho_table;
};

SampleSizePlan make_plan(const RhoInput& input, double target, std::uint64_t seed);

nlohmann::ordered_json plan_to_json(const SampleSizePlan& plan);
SampleSizePlan plan_from_json(const nlohmann::json& j);

}  // namespace peco
