#pragma once

// Portable pseudo-random source for sweeps: std::mt19937_64 seeded with the
// 64-bit seed, doubles as (x >> 11) * 2^-53 and bounded integers by
// rejection on the raw 64-bit output. Standard distributions are avoided
// because their algorithms are implementation-defined.

#include <cstdint>
#include <random>
#include <vector>

namespace qlab {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  /// Random probability vector of length n with every entry in (0, 1).
  std::vector<double> simplex(std::size_t n) {
    std::vector<double> w(n);
    double s = 0.0;
    for (auto& x : w) {
      x = uniform() + 1e-3;
      s += x;
    }
    for (auto& x : w) x /= s;
    return w;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qlab
