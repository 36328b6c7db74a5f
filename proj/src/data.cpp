#include "peco/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "peco/errors.hpp"

namespace peco {

std::string format_double(double v) {
    // Shortest representation that round-trips exactly.
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

DataSet make_dataset(std::size_t dimension, std::vector<DataPoint> points,
                     std::vector<ComponentKind> kinds) {
    if (kinds.empty()) kinds.assign(dimension, ComponentKind::Continuous);
    if (kinds.size() != dimension)
        throw Error(ErrorCode::DimensionError, "kind flags do not match dimension");
    for (const auto& p : points) {
        if (p.size() != dimension)
            throw Error(ErrorCode::DimensionError, "point dimension mismatch");
        for (std::size_t k = 0; k < dimension; ++k)
            if (kinds[k] == ComponentKind::Integer && p[k] != std::floor(p[k]))
                throw Error(ErrorCode::DimensionError,
                            "integer-flagged component holds a non-integer value");
    }
    DataSet d;
    d.dimension = dimension;
    d.kinds = std::move(kinds);
    d.points = std::move(points);
    return d;
}

ScenarioSet underlying_set(const DataSet& d) {
    if (d.points.empty()) throw Error(ErrorCode::EmptyData, "underlying set of an empty dataset");
    ScenarioSet s;
    s.dimension = d.dimension;
    s.kinds = d.kinds;
    std::map<DataPoint, std::size_t> seen;  // point -> index in s.scenarios
    for (const auto& p : d.points) {
        auto it = seen.find(p);
        if (it == seen.end()) {
            seen.emplace(p, s.scenarios.size());
            s.scenarios.push_back(p);
            s.counts.push_back(1);
        } else {
            ++s.counts[it->second];
        }
    }
    return s;
}

DataSet to_dataset(const ScenarioSet& s) {
    DataSet d;
    d.dimension = s.dimension;
    d.kinds = s.kinds;
    d.points = s.scenarios;
    return d;
}

namespace {

double point_distance(const DataPoint& a, const DataPoint& b, VicinityNorm norm) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double diff = std::abs(a[k] - b[k]);
        if (norm == VicinityNorm::L2)
            acc += diff * diff;
        else
            acc = std::max(acc, diff);
    }
    return norm == VicinityNorm::L2 ? std::sqrt(acc) : acc;
}

std::size_t vicinity_count(const DataSet& d, const DataPoint& query, double eta,
                           VicinityNorm norm) {
    std::size_t count = 0;
    for (const auto& p : d.points)
        if (point_distance(p, query, norm) <= eta) ++count;
    return count;
}

}  // namespace

double empirical_probability(const DataSet& d, const DataPoint& query, double eta,
                             VicinityNorm norm) {
    if (d.points.empty()) throw Error(ErrorCode::EmptyData, "probability over an empty dataset");
    if (query.size() != d.dimension)
        throw Error(ErrorCode::DimensionError, "query dimension mismatch");
    if (!(eta > 0.0)) throw Error(ErrorCode::ConfigError, "eta must be positive");
    return static_cast<double>(vicinity_count(d, query, eta, norm)) /
           static_cast<double>(d.size());
}

DataSet build_d_alpha(const DataSet& d, double alpha, double eta, VicinityNorm norm) {
    if (d.points.empty()) throw Error(ErrorCode::EmptyData, "probable set of an empty dataset");
    if (alpha < 0.0 || alpha > 1.0) throw Error(ErrorCode::ConfigError, "alpha outside [0,1]");
    if (!(eta > 0.0)) throw Error(ErrorCode::ConfigError, "eta must be positive");

    // Count once per distinct point; duplicates share the count.
    const ScenarioSet distinct = underlying_set(d);
    std::map<DataPoint, bool> keep;
    const double threshold = alpha * static_cast<double>(d.size());
    for (const auto& s : distinct.scenarios) {
        std::size_t c = vicinity_count(d, s, eta, norm);
        keep[s] = static_cast<double>(c) >= threshold;
    }

    DataSet out;
    out.dimension = d.dimension;
    out.kinds = d.kinds;
    for (const auto& p : d.points)
        if (keep.at(p)) out.points.push_back(p);
    return out;
}

double eta_rule(const DataSet& d, double c) {
    if (d.size() < 2) throw Error(ErrorCode::EmptyData, "bandwidth rule needs at least 2 points");
    const double n = static_cast<double>(d.size());
    double mean_std = 0.0;
    for (std::size_t k = 0; k < d.dimension; ++k) {
        double mean = 0.0;
        for (const auto& p : d.points) mean += p[k];
        mean /= n;
        double ss = 0.0;
        for (const auto& p : d.points) ss += (p[k] - mean) * (p[k] - mean);
        mean_std += std::sqrt(ss / (n - 1.0));
    }
    mean_std /= static_cast<double>(d.dimension);
    return c * std::pow(n, -1.0 / (static_cast<double>(d.dimension) + 4.0)) * mean_std;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        // trim surrounding whitespace
        std::size_t b = field.find_first_not_of(" \t\r");
        std::size_t e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool parse_number(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end;
}

}  // namespace

DataSet load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::EmptyData, "no header row in " + path);
    const std::size_t dimension = split_csv_line(line).size();
    if (dimension == 0) throw Error(ErrorCode::EmptyData, "empty header row in " + path);

    std::vector<ComponentKind> kinds(dimension, ComponentKind::Continuous);
    std::vector<DataPoint> points;
    bool first_data_row = true;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = split_csv_line(line);
        if (first_data_row && (fields[0] == "int" || fields[0] == "float")) {
            // optional kind-flag row
            if (fields.size() != dimension)
                throw Error(ErrorCode::DimensionError, "kind row width mismatch in " + path);
            for (std::size_t k = 0; k < dimension; ++k) {
                if (fields[k] == "int")
                    kinds[k] = ComponentKind::Integer;
                else if (fields[k] == "float")
                    kinds[k] = ComponentKind::Continuous;
                else
                    throw Error(ErrorCode::IoError,
                                "unknown kind flag '" + fields[k] + "' in " + path);
            }
            first_data_row = false;
            continue;
        }
        first_data_row = false;
        if (fields.size() != dimension)
            throw Error(ErrorCode::DimensionError, "row width mismatch at line " +
                                                       std::to_string(line_no) + " in " + path);
        DataPoint p(dimension);
        for (std::size_t k = 0; k < dimension; ++k)
            if (!parse_number(fields[k], p[k]))
                throw Error(ErrorCode::IoError, "bad number '" + fields[k] + "' at line " +
                                                    std::to_string(line_no) + " in " + path);
        points.push_back(std::move(p));
    }
    return make_dataset(dimension, std::move(points), std::move(kinds));
}

void save_csv(const DataSet& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    for (std::size_t k = 0; k < d.dimension; ++k)
        out << (k ? "," : "") << "xi" << (k + 1);
    out << "\n";
    for (std::size_t k = 0; k < d.dimension; ++k)
        out << (k ? "," : "")
            << (d.kinds[k] == ComponentKind::Integer ? "int" : "float");
    out << "\n";
    for (const auto& p : d.points) {
        for (std::size_t k = 0; k < d.dimension; ++k)
            out << (k ? "," : "") << format_double(p[k]);
        out << "\n";
    }
}

std::uint64_t dataset_digest(const DataSet& d) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a offset basis
    auto mix = [&h](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ULL;
        }
    };
    mix(std::to_string(d.dimension));
    for (auto k : d.kinds) mix(k == ComponentKind::Integer ? "i" : "c");
    for (const auto& p : d.points)
        for (double v : p) {
            mix(format_double(v));
            mix(";");
        }
    return h;
}

}  // namespace peco
