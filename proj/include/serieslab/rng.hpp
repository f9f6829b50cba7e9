#pragma once
// Deterministic RNG with named substreams. Everything random in the library
// flows from a single user seed; each consumer derives its own stream by name
// so adding a consumer never perturbs the draws of another. xoshiro256++ with
// splitmix64 seeding: fully specified, so identical output on any platform
// (the standard library distributions are not bit-stable across vendors).

#include <cstdint>
#include <string_view>
#include <vector>

namespace serieslab {

class Rng {
  public:
    explicit Rng(uint64_t seed);
    // Substream derived from (seed, name); independent-looking per name.
    static Rng stream(uint64_t seed, std::string_view name);

    uint64_t next_u64();
    // Uniform in [0,1) with 53 random bits.
    double next_double();
    // Uniform integer in [0, bound); bound > 0. Rejection sampling, unbiased.
    uint64_t next_below(uint64_t bound);
    // Sample an index from a probability vector (entries >= 0, sum ~ 1).
    uint32_t pick(const std::vector<double>& probs);
    // In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    uint64_t s_[4];
};

// FNV-1a 64-bit hash; used for stream names and parameter digests.
uint64_t fnv1a64(std::string_view bytes);

}  // namespace serieslab
