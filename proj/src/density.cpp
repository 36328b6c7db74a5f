#include "peco/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "peco/errors.hpp"
#include "peco/rng.hpp"

namespace peco {

namespace {

void validate(const ProductDensity& d) {
    if (d.factors.empty()) throw Error(ErrorCode::ConfigError, "density needs at least one factor");
    for (const auto& f : d.factors) {
        if (f.components.empty())
            throw Error(ErrorCode::ConfigError, "mixture factor with no components");
        double wsum = 0.0;
        for (const auto& c : f.components) {
            if (!(c.norm > 0.0) || !(c.div > 0.0) || c.weight < 0.0)
                throw Error(ErrorCode::ConfigError,
                            "mixture component needs positive norm/div and nonnegative weight");
            wsum += c.weight;
        }
        if (std::abs(wsum - 1.0) > 1e-9)
            throw Error(ErrorCode::ConfigError, "mixture weights must sum to 1");
    }
}

double component_sigma(const MixtureComponent& c) { return std::sqrt(c.div / 2.0); }

// Per-axis trapezoid nodes and weights over the factor's truncated support.
struct AxisGrid {
    std::vector<double> nodes;
    std::vector<double> weighted_values;  // trapezoid weight * factor density
    std::vector<double> values;
};

AxisGrid axis_grid(const MixtureDensity1D& f, std::size_t count) {
    auto [lo, hi] = factor_box(f);
    AxisGrid g;
    g.nodes.resize(count);
    g.values.resize(count);
    g.weighted_values.resize(count);
    const double h = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        double x = lo + h * static_cast<double>(i);
        double w = (i == 0 || i + 1 == count) ? 0.5 * h : h;
        g.nodes[i] = x;
        g.values[i] = density_eval_1d(f, x);
        g.weighted_values[i] = w * g.values[i];
    }
    return g;
}

void require_low_dimension(const ProductDensity& d) {
    if (d.dimension() > 2)
        throw Error(ErrorCode::ConfigError, "tensor quadrature supports at most 2 factors");
}

}  // namespace

double density_eval_1d(const MixtureDensity1D& d, double x) {
    double acc = 0.0;
    for (const auto& c : d.components) {
        double t = x - c.center;
        acc += c.weight / std::sqrt(c.norm) * std::exp(-t * t / c.div);
    }
    return acc;
}

double density_eval(const ProductDensity& d, const std::vector<double>& point) {
    if (point.size() != d.dimension())
        throw Error(ErrorCode::DimensionError, "density point dimension mismatch");
    double acc = 1.0;
    for (std::size_t k = 0; k < d.factors.size(); ++k)
        acc *= density_eval_1d(d.factors[k], point[k]);
    return acc;
}

bool xi_alpha_member(const XiAlphaRegion& region, const std::vector<double>& point) {
    return density_eval(region.density, point) >= region.alpha;
}

std::pair<double, double> factor_box(const MixtureDensity1D& d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : d.components) {
        double s = component_sigma(c);
        lo = std::min(lo, c.center - 8.0 * s);
        hi = std::max(hi, c.center + 8.0 * s);
    }
    return {lo, hi};
}

double total_mass(const ProductDensity& d, const QuadratureSettings& q) {
    validate(d);
    double mass = 1.0;
    for (const auto& f : d.factors) {
        AxisGrid g = axis_grid(f, q.nodes_per_axis);
        double axis_mass = 0.0;
        for (double wv : g.weighted_values) axis_mass += wv;
        mass *= axis_mass;
    }
    return mass;
}

double superlevel_mass(const ProductDensity& d, double v, const QuadratureSettings& q) {
    validate(d);
    require_low_dimension(d);
    if (d.dimension() == 1) {
        AxisGrid g = axis_grid(d.factors[0], q.nodes_per_axis);
        double mass = 0.0;
        for (std::size_t i = 0; i < g.values.size(); ++i)
            if (g.values[i] >= v) mass += g.weighted_values[i];
        return mass;
    }
    AxisGrid a = axis_grid(d.factors[0], q.nodes_per_axis);
    AxisGrid b = axis_grid(d.factors[1], q.nodes_per_axis);
    double mass = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double fa = a.values[i];
        const double wa = a.weighted_values[i];
        for (std::size_t j = 0; j < b.values.size(); ++j)
            if (fa * b.values[j] >= v) mass += wa * b.weighted_values[j];
    }
    return mass;
}

double alpha_from_beta(const ProductDensity& d, double beta, const QuadratureSettings& q) {
    validate(d);
    require_low_dimension(d);
    if (!(beta > 0.0 && beta < 1.0))
        throw Error(ErrorCode::ConfigError, "beta must lie strictly between 0 and 1");

    const double full = total_mass(d, q);
    if (std::abs(full - 1.0) > 10.0 * q.mass_tolerance)
        throw Error(ErrorCode::NotNormalized,
                    "density mass " + format_double(full) + " is not 1 within tolerance");

    // Flatten the tensor grid into (density, weight), sorted by density,
    // so each bisection step is a binary search over a prefix sum.
    std::vector<std::pair<double, double>> cells;
    if (d.dimension() == 1) {
        AxisGrid g = axis_grid(d.factors[0], q.nodes_per_axis);
        cells.reserve(g.values.size());
        for (std::size_t i = 0; i < g.values.size(); ++i)
            cells.emplace_back(g.values[i], g.weighted_values[i]);
    } else {
        AxisGrid a = axis_grid(d.factors[0], q.nodes_per_axis);
        AxisGrid b = axis_grid(d.factors[1], q.nodes_per_axis);
        cells.reserve(a.values.size() * b.values.size());
        for (std::size_t i = 0; i < a.values.size(); ++i)
            for (std::size_t j = 0; j < b.values.size(); ++j)
                cells.emplace_back(a.values[i] * b.values[j],
                                   a.weighted_values[i] * b.weighted_values[j]);
    }
    std::sort(cells.begin(), cells.end(),
              [](const auto& p, const auto& r) { return p.first > r.first; });
    std::vector<double> prefix(cells.size() + 1, 0.0);
    for (std::size_t i = 0; i < cells.size(); ++i) prefix[i + 1] = prefix[i] + cells[i].second;

    auto mass_at = [&](double v) {
        // mass of cells with density >= v
        std::size_t lo = 0, hi = cells.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (cells[mid].first >= v)
                lo = mid + 1;
            else
                hi = mid;
        }
        return prefix[lo];
    };

    const double target = 1.0 - beta;
    double lo = 0.0;
    double hi = cells.front().first;
    if (mass_at(hi) >= target) {
        // superlevel set collapses to the mode and still meets the target
        double m = mass_at(hi);
        if (std::abs(m - target) > 0.02)
            throw Error(ErrorCode::DegenerateDensity,
                        "superlevel mass cannot approach the requested level");
        return hi;
    }
    // invariant: mass(lo) >= target > mass(hi)
    double v = lo;
    for (std::size_t it = 0; it < q.max_iterations; ++it) {
        double mid = 0.5 * (lo + hi);
        double m = mass_at(mid);
        if (m >= target)
            lo = mid;
        else
            hi = mid;
        if (std::abs(m - target) <= q.mass_tolerance || hi - lo <= q.v_tolerance) break;
    }
    v = lo;
    if (std::abs(mass_at(v) - target) > 0.02)
        throw Error(ErrorCode::DegenerateDensity,
                    "superlevel mass jumps across the requested level (flat density)");
    return v;
}

DataSet sample(const ProductDensity& d, std::size_t count, std::uint64_t seed) {
    validate(d);
    if (count == 0) throw Error(ErrorCode::ConfigError, "sample count must be positive");
    SplitMix64 rng(seed);
    std::vector<DataPoint> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        DataPoint p(d.dimension());
        for (std::size_t k = 0; k < d.dimension(); ++k) {
            const auto& comps = d.factors[k].components;
            double pick = rng.uniform();
            std::size_t idx = 0;
            double acc = 0.0;
            for (std::size_t c = 0; c < comps.size(); ++c) {
                acc += comps[c].weight;
                if (pick < acc) {
                    idx = c;
                    break;
                }
                idx = c;  // numerical slack: last component absorbs the tail
            }
            // uniform strictly inside (0,1) so the quantile stays finite
            double u = (static_cast<double>(rng.next() >> 11) + 0.5) * 0x1.0p-53;
            p[k] = comps[idx].center + component_sigma(comps[idx]) * normal_quantile(u);
        }
        points.push_back(std::move(p));
    }
    return make_dataset(d.dimension(), std::move(points));
}

ProductDensity density_from_json(const nlohmann::json& j) {
    if (!j.contains("factors") || !j["factors"].is_array())
        throw Error(ErrorCode::ConfigError, "density JSON needs a 'factors' array");
    ProductDensity d;
    for (const auto& jf : j["factors"]) {
        if (!jf.contains("components") || !jf["components"].is_array())
            throw Error(ErrorCode::ConfigError, "each factor needs a 'components' array");
        MixtureDensity1D f;
        for (const auto& jc : jf["components"]) {
            MixtureComponent c;
            c.weight = jc.at("w").get<double>();
            c.norm = jc.at("norm").get<double>();
            c.center = jc.at("center").get<double>();
            c.div = jc.at("div").get<double>();
            f.components.push_back(c);
        }
        d.factors.push_back(std::move(f));
    }
    validate(d);
    return d;
}

ProductDensity load_density(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigError, "bad JSON in " + path + ": " + e.what());
    }
    return density_from_json(j);
}

nlohmann::ordered_json density_to_json(const ProductDensity& d) {
    nlohmann::ordered_json j;
    auto factors = nlohmann::ordered_json::array();
    for (const auto& f : d.factors) {
        auto components = nlohmann::ordered_json::array();
        for (const auto& c : f.components)
            components.push_back({{"w", c.weight}, {"norm", c.norm}, {"center", c.center}, {"div", c.div}});
        factors.push_back({{"components", components}});
    }
    j["factors"] = factors;
    return j;
}

}  // namespace peco
