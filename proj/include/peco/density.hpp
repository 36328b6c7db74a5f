#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "peco/data.hpp"

namespace peco {

// One exponential-quadratic bump: w / sqrt(norm) * exp(-(x - center)^2 / div).
// norm is the full radicand as stored in fixture files; the equivalent
// Gaussian has variance div / 2.
struct MixtureComponent {
    double weight = 1.0;
    double norm = 1.0;
    double center = 0.0;
    double div = 1.0;
};

struct MixtureDensity1D {
    std::vector<MixtureComponent> components;
};

// Separable multivariate density: product of one 1-D mixture per component.
struct ProductDensity {
    std::vector<MixtureDensity1D> factors;

    std::size_t dimension() const { return factors.size(); }
};

// Superlevel region {point : density >= alpha}, inclusive.
struct XiAlphaRegion {
    ProductDensity density;
    double alpha = 0.0;
};

struct QuadratureSettings {
    std::size_t nodes_per_axis = 2001;
    double mass_tolerance = 1e-6;
    double v_tolerance = 1e-10;
    std::size_t max_iterations = 200;
};

double density_eval_1d(const MixtureDensity1D& d, double x);
double density_eval(const ProductDensity& d, const std::vector<double>& point);

bool xi_alpha_member(const XiAlphaRegion& region, const std::vector<double>& point);

// Truncated support of one factor: centers +/- 8 equivalent standard
// deviations; the tails beyond carry negligible mass.
std::pair<double, double> factor_box(const MixtureDensity1D& d);

// Trapezoid mass of the whole (truncated) support and of a superlevel set.
double total_mass(const ProductDensity& d, const QuadratureSettings& q = {});
double superlevel_mass(const ProductDensity& d, double v, const QuadratureSettings& q = {});

// Threshold v whose superlevel set holds mass 1 - beta, found by bisection.
// Requires the density to integrate to 1 within 10x the mass tolerance.
double alpha_from_beta(const ProductDensity& d, double beta, const QuadratureSettings& q = {});

// count i.i.d. draws from the normalized law; component by weight, then
// inverse-CDF of the equivalent Gaussian. Deterministic per seed.
DataSet sample(const ProductDensity& d, std::size_t count, std::uint64_t seed);

ProductDensity density_from_json(const nlohmann::json& j);
ProductDensity load_density(const std::string& path);
nlohmann::ordered_json density_to_json(const ProductDensity& d);

}  // namespace peco
