#pragma once

#include <cstdint>
#include <random>

namespace optswitch {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic random stream; (seed, stream) pairs give decorrelated
/// sequences, and the draw mapping is fixed here so results do not depend on
/// the standard library's distribution implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = seed ^ (0x9E3779B97F4A7C15ULL + stream * 0xD1B54A32D192ED03ULL);
    std::uint64_t b = splitmix64(s);
    engine_.seed(a ^ (b + stream));
  }

  std::uint64_t bits() { return engine_(); }

  /// uniform in [0, 1) with 53 random bits
  double uniform01() { return (bits() >> 11) * 0x1.0p-53; }

  /// uniform in {0, .., n-1}, unbiased
  int below(int n) {
    std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % static_cast<std::uint64_t>(n);
    std::uint64_t v;
    do {
      v = bits();
    } while (v >= limit);
    return static_cast<int>(v % static_cast<std::uint64_t>(n));
  }

  /// uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace optswitch
