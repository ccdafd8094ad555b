#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace aoisched {

// Purposes for derived substreams. Each (master seed, purpose, index) triple
// maps to an independent engine so that policies evaluated with the same
// master seed see the same blocker moves and fading draws.
enum class StreamPurpose : std::uint64_t {
  Blocker = 1,
  Gain = 2,
  Layout = 3,
  DataVolume = 4,
  Validation = 5,
  StartState = 6,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, StreamPurpose purpose,
                                 std::uint64_t index = 0) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  return splitmix64(h ^ index);
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t master, StreamPurpose purpose, std::uint64_t index = 0)
      : engine_(derive_seed(master, purpose, index)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Unit-rate exponential via inverse CDF; consumes exactly one draw.
  double exponential() { return -std::log1p(-uniform()); }

  double normal() { return normal_(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace aoisched
