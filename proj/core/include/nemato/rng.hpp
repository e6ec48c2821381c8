#pragma once

#include <cmath>
#include <cstdint>

namespace nemato {

// Counter-based 64-bit generator: output i is a stateless hash of
// (seed, counter). Streams can be split by key without correlation and
// every report can embed the seed for exact reproducibility.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))), counter_(0) {}

  std::uint64_t next_u64() { return mix(seed_ + 0x9e3779b97f4a7c15ULL * (++counter_)); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925287;
    spare_ = r * std::sin(two_pi * u2);
    have_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t seed_;
  std::uint64_t counter_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nemato
