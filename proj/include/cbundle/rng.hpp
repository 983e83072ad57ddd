#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace cbundle {

// splitmix64 round; used to derive independent per-sample seeds
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic across platforms: mt19937_64 output mapped to [0,1) directly.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::complex<double> complex_in_square(double s) {
    double re = uniform(-s, s);
    return {re, uniform(-s, s)};
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace cbundle
