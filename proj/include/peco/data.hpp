#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace peco {

enum class ComponentKind { Integer, Continuous };

using DataPoint = std::vector<double>;

// Finite multiset of u-dimensional samples. Duplicates are meaningful:
// every probability estimate counts multiplicity.
struct DataSet {
    std::size_t dimension = 0;
    std::vector<ComponentKind> kinds;  // one per component
    std::vector<DataPoint> points;

    std::size_t size() const { return points.size(); }
};

// Distinct points of a DataSet with their multiplicities. Equality is
// bit-exact per component; fuzzy closeness is the vicinity count's job.
struct ScenarioSet {
    std::size_t dimension = 0;
    std::vector<ComponentKind> kinds;
    std::vector<DataPoint> scenarios;
    std::vector<std::size_t> counts;

    std::size_t size() const { return scenarios.size(); }
};

enum class VicinityNorm { L2, LInf };

DataSet make_dataset(std::size_t dimension, std::vector<DataPoint> points,
                     std::vector<ComponentKind> kinds = {});

// Distinct points in first-occurrence order; counts sum to |d|.
ScenarioSet underlying_set(const DataSet& d);

DataSet to_dataset(const ScenarioSet& s);

// Fraction of the multiset lying within the eta-ball around query,
// multiplicity included; query counts itself when present.
double empirical_probability(const DataSet& d, const DataPoint& query, double eta,
                             VicinityNorm norm = VicinityNorm::L2);

// Sub-multiset of points whose vicinity count reaches alpha * |d|
// (inclusive), original order and multiplicity preserved.
DataSet build_d_alpha(const DataSet& d, double alpha, double eta,
                      VicinityNorm norm = VicinityNorm::L2);

// Rule-of-thumb bandwidth: c * D^(-1/(u+4)) * mean per-dimension sample
// standard deviation. Never applied implicitly; callers opt in.
double eta_rule(const DataSet& d, double c = 1.06);

// CSV: header row of component names, optional second row of int/float
// kind flags, then one point per row.
DataSet load_csv(const std::string& path);
void save_csv(const DataSet& d, const std::string& path);

// FNV-1a over the canonical text form; identifies a dataset in run records.
std::uint64_t dataset_digest(const DataSet& d);

// Canonical shortest round-trip formatting used by digests, CSV and JSON.
std::string format_double(double v);

}  // namespace peco
