#pragma once

#include <cstdint>
#include <vector>

#include "oed/errors.hpp"

namespace oed {

struct RngSeed {
  std::uint64_t value = 0;
};

// Counter-based generator: the i-th output is a fixed 64-bit mix of
// (key, i), so streams are reproducible bit-for-bit for a given seed and
// independent substreams can be split off by key derivation.  No global
// state anywhere.
class CounterRng {
 public:
  explicit CounterRng(RngSeed seed) : key_(mix64(seed.value ^ kKeyTweak)) {}

  // Child generator for an independent substream (cell of a sweep, trial
  // index, ...).  derive(a).derive(b) != derive(b).derive(a).
  CounterRng derive(std::uint64_t tag) const {
    CounterRng child(RngSeed{0});
    child.key_ = mix64(key_ ^ mix64(tag + kDeriveTweak));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t next_u64() { return mix64(key_ + kGamma * ++counter_); }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe under log().
  double next_double_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) without modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw ArgumentError("next_below: bound must be positive");
    const std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal via Box-Muller; the pair is cached.
  double next_gaussian();

  // k distinct indices from [0, n), uniform, by partial Fisher-Yates.
  std::vector<long> sample_without_replacement(long n, long k);

  // Index draw proportional to nonnegative weights (inverse CDF).
  long next_categorical(const std::vector<double>& cumulative);

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kKeyTweak = 0x8F0C350BF9A7D513ULL;
  static constexpr std::uint64_t kDeriveTweak = 0xD1B54A32D192ED03ULL;

  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  bool have_cached_gaussian_ = false;
  double cached_gaussian_ = 0.0;
};

// Cumulative sums for next_categorical; rejects negative weights.
std::vector<double> cumulative_weights(const std::vector<double>& weights);

}  // namespace oed
