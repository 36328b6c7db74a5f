#include "peco/rng.hpp"

#include <cmath>
#include <numeric>

namespace peco {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // One splitmix64 scramble of the combined value; distinct streams land in
    // uncorrelated states even for adjacent indices.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double normal_quantile(double p) {
    // Acklam's approximation, |relative error| < 1.15e-9, then one Halley
    // refinement using the exact CDF via erfc.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;

    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Halley: e = Phi(x) - p, u = e / phi(x); x -= u / (1 + x*u/2).
    const double inv_sqrt2 = 0.7071067811865475244;
    const double inv_sqrt2pi = 0.3989422804014326779;
    double e = 0.5 * std::erfc(-x * inv_sqrt2) - p;
    double u = e / (inv_sqrt2pi * std::exp(-0.5 * x * x));
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t z,
                                                    SplitMix64& rng) {
    std::vector<std::size_t> pool(population);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < z; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(population - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(z);
    return pool;
}

}  // namespace peco
