#pragma once

#include <cstdint>
#include <initializer_list>

namespace skg {

/// SplitMix64 stream. Streams are derived from (seed, path of tags), so every
/// protocol phase draws from its own independent, platform-stable sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix(0x853c49e6748fea9bULL, seed);
    for (std::uint64_t tag : path) s = mix(s, tag);
    return Rng(s);
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return finalize(state_);
  }

  /// Uniform double in [0, 1).
  double next_double() { return double(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased (rejection sampling). n >= 1.
  std::uint32_t below(std::uint32_t n) {
    const std::uint64_t threshold = (~std::uint64_t(0)) - (~std::uint64_t(0)) % n;
    for (;;) {
      std::uint64_t v = next();
      if (v < threshold) return std::uint32_t(v % n);
    }
  }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return finalize(a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2)));
  }

  std::uint64_t state_;
};

}  // namespace skg
