#pragma once

// Builders for elimination problems: R is whatever LHS - P - Q leaves, and
// optional uniform noise is added to psi_1 afterwards.

#include <vector>

#include "qlab/elimination.hpp"
#include "qlab/rng.hpp"

namespace problems {

using namespace qlab;

inline Complex horner(const std::vector<double>& c, std::int64_t y) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * static_cast<double>(y) + *it;
  return {acc, 0.0};
}

inline WindowFunction poly(const std::vector<double>& c, std::int64_t radius) {
  return WindowFunction::sample(radius, 1, [&](std::span<const std::int64_t> y) {
    return horner(c, y[0]);
  });
}

inline void perturb(std::vector<Complex>& v, double noise, std::uint64_t seed) {
  if (noise <= 0.0) return;
  Rng rng(seed);
  for (auto& z : v) z += noise * (2.0 * rng.uniform() - 1.0);
}

inline WindowShiftProblem window_shift(const std::vector<std::vector<double>>& psi,
                                       const std::vector<int>& b, std::int64_t radius, int l,
                                       double noise = 0.0, std::uint64_t seed = 0) {
  std::vector<WindowFunction> pw;
  for (const auto& c : psi) pw.push_back(poly(c, 2 * radius));
  const auto lhs = [&](std::int64_t u, std::int64_t v) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < pw.size(); ++j) acc += pw[j].at(Point{u + b[j] * v});
    return acc;
  };
  const auto r = WindowFunction::sample(radius, 2, [&](std::span<const std::int64_t> x) {
    return lhs(x[0], x[1]) - lhs(x[0], 0) - lhs(0, x[1]) + lhs(0, 0);
  });
  perturb(pw[0].values, noise, seed);
  const auto p = WindowFunction::sample(radius, 1, [&](std::span<const std::int64_t> x) {
    return lhs(x[0], 0);
  });
  const auto q = WindowFunction::sample(radius, 1, [&](std::span<const std::int64_t> x) {
    return lhs(0, x[0]) - lhs(0, 0);
  });
  return {radius, pw, b, p, q, r, l};
}

inline FiniteShiftProblem finite_shift(const FiniteAbelianGroup& g,
                                       std::vector<FiniteFunction> psi,
                                       const std::vector<GroupHom>& b, int l,
                                       double noise = 0.0, std::uint64_t seed = 0) {
  const auto lhs = [&](Index u, Index v) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) acc += psi[j][g.add(u, b[j](v))];
    return acc;
  };
  const auto r = FiniteFunction::sample(g.product(g), [&](Index x) {
    const Index u = x / g.size(), v = x % g.size();
    return lhs(u, v) - lhs(u, 0) - lhs(0, v) + lhs(0, 0);
  });
  perturb(psi[0].values, noise, seed);
  const auto p = FiniteFunction::sample(g, [&](Index u) { return lhs(u, 0); });
  const auto q = FiniteFunction::sample(g, [&](Index v) { return lhs(0, v) - lhs(0, 0); });
  return {g, psi, b, p, q, r, l};
}

// b = 1: LHS = psi1(2u + 2v) + psi2(2u + 2v).
inline WindowHeydeProblem window_heyde(const std::vector<double>& c1,
                                       const std::vector<double>& c2, std::int64_t radius,
                                       int l, double noise = 0.0, std::uint64_t seed = 0) {
  auto w1 = poly(c1, 4 * radius);
  const auto w2 = poly(c2, 4 * radius);
  const auto lhs = [&](std::int64_t u, std::int64_t v) {
    return w1.at(Point{2 * u + 2 * v}) + w2.at(Point{2 * u + 2 * v});
  };
  const auto r = WindowFunction::sample(radius, 2, [&](std::span<const std::int64_t> x) {
    return lhs(x[0], x[1]) - lhs(x[0], 0) - lhs(0, x[1]);
  });
  perturb(w1.values, noise, seed);
  return {radius, w1, w2, 1, r, l, std::nullopt, std::nullopt};
}

inline FiniteHeydeProblem finite_heyde(const FiniteAbelianGroup& g, FiniteFunction psi1,
                                       const FiniteFunction& psi2, const GroupHom& b, int l,
                                       double noise = 0.0, std::uint64_t seed = 0) {
  const auto ib = GroupHom::identity(g) + b;
  const auto [p, q] = heyde_pq(g, psi1, psi2, b);
  const auto r = FiniteFunction::sample(g.product(g), [&](Index x) {
    const Index u = x / g.size(), v = x % g.size();
    return psi1[g.add(ib(u), g.scale(v, 2))] + psi2[g.add(g.scale(b(u), 2), ib(v))] - p[u] -
           q[v];
  });
  perturb(psi1.values, noise, seed);
  return {g, psi1, psi2, b, r, l, std::nullopt, std::nullopt};
}

inline FiniteFunction constant(const FiniteAbelianGroup& g, Complex c) {
  return FiniteFunction::sample(g, [c](Index) { return c; });
}

}  // namespace problems
