#pragma once

#include <cstdint>
#include <vector>

namespace peco {

// Name recorded in plans, reports and run records so results can be replayed
// on any platform. std::mt19937 + std distributions are not used because the
// standard leaves distribution algorithms implementation-defined.
inline constexpr const char* kPrngName = "splitmix64";

// splitmix64: public-domain 64-bit generator (Steele, Lea, Flood).
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by rejection; no modulo bias.
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

  private:
    std::uint64_t state_;
};

// Stateless mixing of (seed, stream index) into an independent stream seed;
// used to derive per-batch seeds so batched computations are order-invariant.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Inverse standard normal CDF: Acklam's rational approximation polished by
// one Halley step against erfc, accurate to ~1e-15 over (0, 1).
double normal_quantile(double p);

// Fisher-Yates prefix: the first z entries of a random permutation of
// 0..population-1, deterministic for a given seed.
std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t z,
                                                    SplitMix64& rng);

}  // namespace peco
