#pragma once

#include <cstdint>
#include <vector>

namespace neurocactus {

// splitmix64 stream. Self-contained so that seeded output is identical on
// every platform and standard library (std::uniform_* distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53 random bits
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // uniform integer in [0, n); n must be > 0
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  bool coin(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }
};

// Independent stream for (seed, index) pairs; used for order-independent
// per-sample draws.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  Rng mix(seed ^ (0xA0761D6478BD642FULL * (index + 1)));
  return mix.next();
}

}  // namespace neurocactus
