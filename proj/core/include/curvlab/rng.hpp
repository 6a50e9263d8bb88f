#pragma once

#include <cmath>
#include <cstdint>

namespace curvlab {

// SplitMix64. Used for every random draw in the library instead of <random>
// engines so that streams are reproducible independent of the standard
// library implementation.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
  std::uint64_t state_;
};

// Fixed seed-splitting rule: stream k of a master seed is the scrambled
// value of master ^ (k+1)*phi64. Restart k of an optimizer run, sample k of
// an oracle run, and trial k of the implication harness all use this rule,
// which is what makes results independent of scheduling.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 s(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  return s.next();
}

// Standard normal via Box-Muller. Two uniforms per call, no cached state.
inline double standard_normal(SplitMix64& rng) {
  const double u1 = 1.0 - rng.uniform01();  // (0, 1], keeps log finite
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(6.28318530717958647692528676655900577 * u2);
}

}  // namespace curvlab
