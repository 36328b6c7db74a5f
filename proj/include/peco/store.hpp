#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "peco/sdds.hpp"

namespace peco {

// One completed pipeline run, persisted as a single JSON line.
struct RunRecord {
    std::string problem_digest;
    std::string dataset_digest;
    std::vector<double> delta;           // user-declared deterministic parameters
    std::size_t family_size = 0;         // R
    std::vector<std::pair<std::size_t, std::size_t>> r_bar;  // (|J|, union) pairs
    SolverFingerprint fingerprint;
    std::uint64_t seed = 0;
    double alpha = 0.0;
    double eta = 0.0;
    std::size_t z = 0;
    std::vector<double> x_star;
    double objective = 0.0;
    std::string timestamp;  // ISO 8601 UTC, assigned at append time by the pipeline
};

struct StoreQueryResult {
    std::vector<RunRecord> records;           // append order
    std::vector<std::size_t> corrupt_lines;   // 1-based line numbers that failed to parse
};

nlohmann::ordered_json record_to_json(const RunRecord& record);
RunRecord record_from_json(const nlohmann::json& j);

std::string utc_timestamp();

// Appends one JSON line under an advisory exclusive lock, so concurrent
// pipeline runs never interleave partial lines.
void store_append(const std::string& path, const RunRecord& record);

// Reads every line; unparseable lines are reported by number, never thrown.
// An empty digest matches all records. A missing file is an empty store.
StoreQueryResult store_query(const std::string& path, const std::string& problem_digest = "");

// k-nearest-neighbor estimate of the union-size table from past runs.
// Distances are Euclidean over delta standardized by the records' own
// per-component statistics (zero spread maps to unit scale). The prediction
// is the componentwise median of the neighbors' union sizes, rounded up.
// Throws InsufficientHistory (< k records) or MixedFamilySizes (records
// disagree on R or on the subset layout).
std::vector<std::pair<std::size_t, std::size_t>> predict_r_bar(
    const std::vector<RunRecord>& records, const std::vector<double>& delta, std::size_t k);

}  // namespace peco
