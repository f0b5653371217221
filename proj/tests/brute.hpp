#pragma once

// Brute-force reference computations used only by tests. Everything here
// works from raw coordinates so it shares no code path with the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qlab/group.hpp"
#include "qlab/measures.hpp"

namespace brute {

using qlab::Complex;
using qlab::FiniteAbelianGroup;
using qlab::Index;

/// exp(2 pi i sum_j x_j y_j / n_j).
inline Complex pairing(const FiniteAbelianGroup& g, Index x, Index y) {
  const auto a = g.element(x).coords;
  const auto b = g.element(y).coords;
  double phase = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const auto n = g.orders()[j];
    phase += static_cast<double>((a[j] * b[j]) % n) / static_cast<double>(n);
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * phase);
}

inline std::vector<Complex> char_fn(const qlab::Distribution& mu) {
  const auto& g = mu.group();
  std::vector<Complex> f(g.size());
  for (Index y = 0; y < g.size(); ++y) {
    for (Index x = 0; x < g.size(); ++x) f[y] += pairing(g, x, y) * mu[x];
  }
  return f;
}

inline Index add(const FiniteAbelianGroup& g, Index a, Index b) {
  auto x = g.element(a).coords;
  const auto y = g.element(b).coords;
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = (x[j] + y[j]) % g.orders()[j];
  return g.index_of(qlab::GroupElement{x});
}

inline Index scale(const FiniteAbelianGroup& g, Index a, std::int64_t n) {
  auto x = g.element(a).coords;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto m = g.orders()[j];
    x[j] = ((x[j] * n) % m + m) % m;
  }
  return g.index_of(qlab::GroupElement{x});
}

/// Annihilator by testing every dual element against every member of K.
inline std::vector<Index> annihilator(const FiniteAbelianGroup& g, const std::vector<Index>& k) {
  std::vector<Index> out;
  for (Index y = 0; y < g.size(); ++y) {
    bool all = true;
    for (Index x : k) all = all && std::abs(pairing(g, x, y) - 1.0) < 1e-9;
    if (all) out.push_back(y);
  }
  return out;
}

}  // namespace brute
