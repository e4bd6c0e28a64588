#pragma once
#include <cmath>
#include <cstdint>

namespace ofbm::rng {

// Splitmix64 finalizer (Steele/Lea/Flood; Vigna's fixed-increment variant).
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based stream keyed by (seed, stream, substream): every draw is a
/// pure function of the key and the counter, so parallel generation is
/// order-independent and bitwise reproducible.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
      : key_(mix(mix(mix(seed) ^ stream) ^ substream)) {}

  double uniform(std::uint64_t counter) const {
    const std::uint64_t h = mix(key_ ^ (0x9E3779B97F4A7C15ULL * (counter + 1)));
    return (h >> 11) * 0x1.0p-53 + 0x1.0p-54;  // in (0, 1)
  }

  /// Standard normal via Box-Muller on two dedicated uniforms.
  double normal(std::uint64_t counter) const {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

 private:
  std::uint64_t key_;
};

}  // namespace ofbm::rng
