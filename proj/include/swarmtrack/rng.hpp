#pragma once

#include <cassert>
#include <cstdint>

namespace swarmtrack {

// All randomness flows through xoshiro256** 1.0 seeded via splitmix64 (both
// public-domain algorithms by Blackman & Vigna). Distributions are hand-rolled
// from raw 64-bit draws, so sequences are identical on every platform and
// standard library. Run logs depend on this for cross-platform determinism.

struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

inline std::uint64_t mix64(std::uint64_t x) { return SplitMix64{x}.next(); }

// Folds an index into a seed. Used for per-run seeds in batch sweeps and for
// the engine's named substreams.
inline std::uint64_t mix_index(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& word : s_) word = sm.next();
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  // Unbiased draw in [0, n) by rejection sampling. Requires n >= 1.
  std::uint64_t uniform_below(std::uint64_t n) {
    assert(n >= 1);
    const std::uint64_t rem = UINT64_MAX % n;
    const std::uint64_t zone = UINT64_MAX - rem;  // multiple of n
    std::uint64_t x = next_u64();
    while (x >= zone) x = next_u64();
    return x % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace swarmtrack
