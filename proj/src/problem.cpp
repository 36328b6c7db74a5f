#include "peco/problem.hpp"

#include <fstream>

#include "peco/data.hpp"
#include "peco/errors.hpp"

namespace peco {

namespace {

bool uses_uncertainty(const Expression::NodePtr& node) {
    if (!node) return false;
    if (node->op == Expression::Op::VarXi) return true;
    return uses_uncertainty(node->left) || uses_uncertainty(node->right);
}

std::vector<double> read_vector(const nlohmann::json& j, const char* key, std::size_t expected) {
    if (!j.contains(key) || !j[key].is_array())
        throw Error(ErrorCode::ConfigError, std::string("problem field '") + key +
                                                "' missing or not an array");
    std::vector<double> v = j[key].get<std::vector<double>>();
    if (expected && v.size() != expected)
        throw Error(ErrorCode::ConfigError,
                    std::string("problem field '") + key + "' has wrong length");
    return v;
}

}  // namespace

ProblemSpec problem_from_json(const nlohmann::json& j) {
    ProblemSpec spec;
    if (!j.contains("n") || !j.contains("u") || !j.contains("objective") ||
        !j.contains("constraints") || !j.contains("bounds") || !j.contains("start"))
        throw Error(ErrorCode::ConfigError,
                    "problem JSON needs n, u, objective, constraints, bounds, start");
    spec.n = j["n"].get<std::size_t>();
    spec.u = j["u"].get<std::size_t>();
    if (spec.n == 0) throw Error(ErrorCode::ConfigError, "decision dimension must be positive");

    spec.objective = parse(j["objective"].get<std::string>(), spec.n, spec.u);
    if (uses_uncertainty(spec.objective.root()))
        throw Error(ErrorCode::ConfigError, "objective must depend on decision variables only");

    if (!j["constraints"].is_array() || j["constraints"].empty())
        throw Error(ErrorCode::ConfigError, "at least one constraint required");
    for (const auto& c : j["constraints"])
        spec.constraints.push_back(parse(c.get<std::string>(), spec.n, spec.u));

    if (!j["bounds"].is_array() || j["bounds"].size() != spec.n)
        throw Error(ErrorCode::ConfigError, "bounds must list one [lo, hi] pair per decision variable");
    for (const auto& pair : j["bounds"]) {
        if (!pair.is_array() || pair.size() != 2)
            throw Error(ErrorCode::ConfigError, "each bound must be [lo, hi]");
        double lo = pair[0].get<double>();
        double hi = pair[1].get<double>();
        if (!(lo <= hi)) throw Error(ErrorCode::ConfigError, "bound with lo > hi");
        spec.lower.push_back(lo);
        spec.upper.push_back(hi);
    }

    spec.start = read_vector(j, "start", spec.n);
    for (std::size_t k = 0; k < spec.n; ++k)
        if (spec.start[k] < spec.lower[k] || spec.start[k] > spec.upper[k])
            throw Error(ErrorCode::ConfigError, "start point outside bounds");

    if (j.contains("delta")) spec.delta = read_vector(j, "delta", 0);
    return spec;
}

ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigError, "bad JSON in " + path + ": " + e.what());
    }
    return problem_from_json(j);
}

nlohmann::ordered_json problem_to_json(const ProblemSpec& spec) {
    nlohmann::ordered_json j;
    j["n"] = spec.n;
    j["u"] = spec.u;
    j["objective"] = spec.objective.source();
    nlohmann::ordered_json constraints = nlohmann::ordered_json::array();
    for (const auto& c : spec.constraints) constraints.push_back(c.source());
    j["constraints"] = constraints;
    nlohmann::ordered_json bounds = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < spec.n; ++k)
        bounds.push_back({spec.lower[k], spec.upper[k]});
    j["bounds"] = bounds;
    j["start"] = spec.start;
    if (!spec.delta.empty()) j["delta"] = spec.delta;
    return j;
}

std::uint64_t problem_digest(const ProblemSpec& spec) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ULL;
        }
        h ^= 0x1f;
        h *= 1099511628211ULL;
    };
    mix(std::to_string(spec.n));
    mix(std::to_string(spec.u));
    mix(spec.objective.source());
    for (const auto& c : spec.constraints) mix(c.source());
    for (std::size_t k = 0; k < spec.n; ++k) {
        mix(format_double(spec.lower[k]));
        mix(format_double(spec.upper[k]));
    }
    return h;
}

}  // namespace peco
