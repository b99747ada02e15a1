#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace orthowalk {

/// Seedable generator used by every sampler: std::mt19937_64 seeded with a
/// single 64-bit value. Its output sequence is fixed by the C++ standard, and
/// the conversions below avoid the implementation-defined distributions, so
/// a seed reproduces bit-identical samples on any conforming toolchain.
class Rng {
 public:
  static constexpr std::string_view kGeneratorName = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Exactly uniform integer in [0, bound), by rejection. bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % bound;
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer applied to master + stream * golden gamma. Worker k
/// of a run seeded with `master` uses derive_seed(master, k).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace orthowalk
