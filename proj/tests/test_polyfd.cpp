#include <gtest/gtest.h>

#include <cmath>

#include "qlab/error.hpp"
#include "qlab/polyfd.hpp"
#include "qlab/rng.hpp"
#include "qlab/scenario.hpp"

using namespace qlab;

namespace {

WindowFunction win1(std::int64_t r, const std::function<double(double)>& f) {
  return WindowFunction::sample(r, 1, [&](std::span<const std::int64_t> y) {
    return Complex{f(static_cast<double>(y[0])), 0.0};
  });
}

WindowFunction win2(std::int64_t r, const std::function<double(double, double)>& f) {
  return WindowFunction::sample(r, 2, [&](std::span<const std::int64_t> y) {
    return Complex{f(static_cast<double>(y[0]), static_cast<double>(y[1])), 0.0};
  });
}

double max_diff(const WindowFunction& a, const WindowFunction& b) {
  EXPECT_EQ(a.box, b.box);
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

double max_diff(const FiniteFunction& a, const FiniteFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

FiniteFunction random_function(const FiniteAbelianGroup& g, Rng& rng) {
  return FiniteFunction::sample(g, [&](Index) {
    return Complex{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
  });
}

}  // namespace

TEST(IntegerBox, ShrinkAndIndex) {
  const auto b = IntegerBox::centered(3, 2);
  EXPECT_EQ(b.size(), 49u);
  EXPECT_EQ(b.radius(), 3);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b.index(b.point(i)), i);
  const Point h{2, -1};
  const auto s = b.shrink(h);
  EXPECT_EQ(s.lo, (Point{-3, -2}));
  EXPECT_EQ(s.hi, (Point{1, 3}));
  EXPECT_EQ(s.radius(), 1);
}

TEST(Delta, WindowExamples) {
  const auto f = win1(10, [](double y) { return y * y; });
  const Point h{1};
  const auto d = delta(f, h);
  EXPECT_EQ(d.box.lo, Point{-10});
  EXPECT_EQ(d.box.hi, Point{9});
  EXPECT_EQ(max_diff(d, WindowFunction::sample(d.box, [](std::span<const std::int64_t> y) {
              return Complex{2.0 * static_cast<double>(y[0]) + 1.0, 0.0};
            })),
            0.0);
  const auto c = delta(win1(4, [](double) { return 7.0; }), h);
  EXPECT_EQ(c.max_abs(), 0.0);
}

TEST(Delta, CharacterPicksUpFactor) {
  const FiniteAbelianGroup z4({4});
  const auto chi = FiniteFunction::sample(z4, [&](Index y) { return z4.pairing(1, y); });
  const auto d = delta(chi, 1);
  for (Index y = 0; y < 4; ++y) {
    EXPECT_NEAR(std::abs(d[y] - (Complex(0, 1) - 1.0) * chi[y]), 0.0, 1e-15);
  }
}

TEST(Delta, ExhaustedWindowThrows) {
  const Point h{5};
  EXPECT_THROW(delta(win1(2, [](double y) { return y; }), h), WindowExhausted);
}

TEST(Delta, DifferencesCommuteOnFiniteGroups) {
  Rng rng(4);
  for (const auto& g : groups_up_to(16)) {
    const auto f = random_function(g, rng);
    for (Index h = 0; h < g.size(); ++h) {
      for (Index k = 0; k < g.size(); ++k) {
        ASSERT_EQ(max_diff(delta(delta(f, h), k), delta(delta(f, k), h)), 0.0);
      }
    }
  }
}

TEST(Delta, DifferencesCommuteOnWindows) {
  Rng rng(6);
  const auto f = WindowFunction::sample(6, 2, [&](std::span<const std::int64_t>) {
    return Complex{rng.uniform(), 0.0};
  });
  for (const Point& h : {Point{1, 0}, Point{-2, 1}, Point{1, 1}}) {
    for (const Point& k : {Point{0, 1}, Point{2, -1}, Point{-1, -1}}) {
      EXPECT_EQ(max_diff(delta(delta(f, h), k), delta(delta(f, k), h)), 0.0);
    }
  }
}

TEST(IsPolynomial, Examples) {
  const auto sq = win1(10, [](double y) { return y * y; });
  EXPECT_TRUE(is_polynomial(sq, 2).polynomial);
  EXPECT_FALSE(is_polynomial(sq, 1).polynomial);

  const FiniteAbelianGroup z6({6});
  const auto ind = FiniteFunction::sample(z6, [](Index y) { return y == 0 ? 1.0 : 0.0; });
  for (int n = 0; n <= 10; ++n) EXPECT_FALSE(is_polynomial(ind, n).polynomial) << n;

  for (const auto& g : {FiniteAbelianGroup({7}), FiniteAbelianGroup({2, 2})}) {
    const auto c = FiniteFunction::sample(g, [](Index) { return Complex{3.5, -1.0}; });
    EXPECT_TRUE(is_polynomial(c, 0).polynomial);
  }
  EXPECT_TRUE(is_polynomial(win1(5, [](double) { return 2.0; }), 0).polynomial);
}

TEST(IsPolynomial, WindowTooSmallThrows) {
  EXPECT_THROW(is_polynomial(win1(3, [](double y) { return y; }), 2), WindowExhausted);
}

TEST(IsPolynomial, FiniteGroupsOnlyAcceptConstants) {
  Rng rng(8);
  for (const auto& g : groups_up_to(12)) {
    const auto f = random_function(g, rng);
    const auto c = FiniteFunction::sample(g, [](Index) { return Complex{0.25, 0.0}; });
    for (int n = 0; n <= static_cast<int>(g.size()); ++n) {
      ASSERT_EQ(is_polynomial(f, n).polynomial, g.size() == 1) << g.to_string() << " n=" << n;
      ASSERT_TRUE(is_polynomial(c, n).polynomial);
    }
    if (g.size() > 1) {
      const auto chi = FiniteFunction::sample(g, [&](Index y) { return g.pairing(1, y); });
      ASSERT_FALSE(is_polynomial(chi, static_cast<int>(g.size())).polynomial);
    }
  }
}

TEST(IsPolynomial, LinearCombinationsStayAccepted) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(4), b(4);
    for (auto& c : a) c = 4.0 * rng.uniform() - 2.0;
    for (auto& c : b) c = 4.0 * rng.uniform() - 2.0;
    const double s = 3.0 * rng.uniform() - 1.5, t = 3.0 * rng.uniform() - 1.5;
    const auto cubic = [](const std::vector<double>& c) {
      return [c](double y) { return c[0] + y * (c[1] + y * (c[2] + y * c[3])); };
    };
    const auto f = win1(12, cubic(a)), g = win1(12, cubic(b));
    ASSERT_TRUE(is_polynomial(f, 3).polynomial);
    ASSERT_TRUE(is_polynomial(g, 3).polynomial);
    auto h = f;
    for (std::size_t i = 0; i < h.values.size(); ++i) h.values[i] = s * f.values[i] + t * g.values[i];
    ASSERT_TRUE(is_polynomial(h, 3).polynomial);
  }
}

TEST(MinDegree, Examples) {
  EXPECT_EQ(min_degree(win2(6, [](double u, double v) { return u * v; }), 8)->degree, 2);
  EXPECT_EQ(min_degree(win1(10, [](double y) { return std::pow(y, 4); }), 8)->degree, 4);
  EXPECT_FALSE(min_degree(win1(12, [](double y) { return std::pow(2.0, y); }), 8));
  const FiniteAbelianGroup z7({7}), z2({2}), z5({5});
  EXPECT_EQ(min_degree(FiniteFunction::sample(z7, [](Index) { return Complex{2.0, 0.0}; }), 8)->degree, 0);
  EXPECT_FALSE(min_degree(FiniteFunction::sample(z2, [](Index y) { return y == 0 ? 1.0 : 0.0; }), 8));
  EXPECT_FALSE(min_degree(FiniteFunction::sample(z5, [&](Index y) { return z5.pairing(2, y); }), 8));
}

TEST(MinDegree, IndicatorOnZ2DifferencesAlternate) {
  // Delta_1^k of the indicator of {0} on Z_2 is +-2^{k-1}, never zero.
  const FiniteAbelianGroup z2({2});
  auto f = FiniteFunction::sample(z2, [](Index y) { return y == 0 ? 1.0 : 0.0; });
  for (int k = 1; k <= 8; ++k) {
    f = delta(f, 1);
    EXPECT_EQ(std::abs(f[0].real()), std::ldexp(1.0, k - 1));
    EXPECT_EQ(f[0].real(), -f[1].real());
  }
}

TEST(MinDegree, DropsUnderDifferencing) {
  Rng rng(12);
  for (int d = 1; d <= 5; ++d) {
    std::vector<double> c(d + 1);
    for (auto& x : c) x = rng.uniform() + 0.5;
    const auto f = win1(14, [&](double y) {
      double v = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * y + *it;
      return v;
    });
    ASSERT_EQ(min_degree(f, 8)->degree, d);
    for (std::int64_t h : {1, 2, -1}) {
      const Point hp{h};
      ASSERT_LE(min_degree(delta(f, hp), 8)->degree, d - 1);
    }
  }
}

TEST(ConstancyOfBoundedPolynomials, PolynomialIffConstant) {
  Rng rng(13);
  for (const auto& g : groups_up_to(12)) {
    const auto c = FiniteFunction::sample(g, [](Index) { return Complex{-2.0, 1.0}; });
    const auto vc = lemma5_constancy(c);
    EXPECT_TRUE(vc.constant && vc.polynomial && vc.consistent());
    EXPECT_EQ(vc.depth, static_cast<int>(std::min<std::size_t>(g.size(), 64)));
    if (g.size() == 1) continue;
    const auto vf = lemma5_constancy(random_function(g, rng));
    EXPECT_FALSE(vf.constant);
    EXPECT_FALSE(vf.polynomial);
    EXPECT_TRUE(vf.consistent());
  }
}

TEST(QuadraticCheck, Examples) {
  for (double sigma : {0.5, 1.0, 2.0}) {
    EXPECT_EQ(quadratic_check(win1(10, [&](double n) { return sigma * n * n; })).residual, 0.0);
  }
  const auto r = quadratic_check(win1(10, [](double n) { return std::pow(n, 4); }));
  EXPECT_GE(r.residual, 12.0);
  const auto one = quadratic_check(win1(2, [](double n) { return std::pow(n, 4); }));
  EXPECT_EQ(one.residual, 12.0);
  EXPECT_EQ(std::abs(one.u[0]), 1);
  EXPECT_EQ(std::abs(one.v[0]), 1);
  EXPECT_EQ(quadratic_check(win1(5, [](double) { return 0.0; })).residual, 0.0);
}

TEST(QuadraticCheck, RejectsAsymmetricInput) {
  EXPECT_THROW(quadratic_check(win1(5, [](double n) { return n * n * n; })), InvalidArgument);
  EXPECT_THROW(quadratic_check(win1(5, [](double n) { return n * n + 1.0; })), InvalidArgument);
}

TEST(QuadraticCheck, ZeroExactlyForQuadratics) {
  Rng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = rng.uniform() + 0.1, b = rng.uniform() * (trial % 2);
    const auto phi = win1(8, [&](double n) { return a * n * n + b * n * n * n * n; });
    const bool zero = quadratic_check(phi).residual < 1e-9;
    const auto fit = fit_polynomial_window(phi, 6);
    ASSERT_TRUE(fit);
    EXPECT_EQ(zero, fit->degree == 2);
  }
}

TEST(FitPolynomialWindow, Examples) {
  const auto q = fit_polynomial_window(
      win2(6, [](double u, double v) { return -12.0 * u * u * v * v; }), 8);
  ASSERT_TRUE(q);
  EXPECT_EQ(q->degree, 4);
  EXPECT_EQ(q->real.terms().size(), 1u);
  EXPECT_EQ(q->real.coefficient({2, 2}), -12.0);
  EXPECT_TRUE(q->exact);

  const auto z = fit_polynomial_window(win2(4, [](double, double) { return 0.0; }), 4);
  ASSERT_TRUE(z);
  EXPECT_EQ(z->degree, 0);
  EXPECT_TRUE(z->real.is_zero());

  const auto uv = fit_polynomial_window(win2(5, [](double u, double v) { return 2.0 * u * v; }), 4);
  ASSERT_TRUE(uv);
  EXPECT_EQ(uv->degree, 2);
  EXPECT_EQ(uv->real.coefficient({1, 1}), 2.0);
}

TEST(FitPolynomialWindow, NonIntegerCoefficientsByLeastSquares) {
  const auto f = fit_polynomial_window(
      win2(6, [](double u, double v) { return 0.3 * u * u - 1.7 * u * v + 0.01; }), 4);
  ASSERT_TRUE(f);
  EXPECT_EQ(f->degree, 2);
  EXPECT_NEAR(f->real.coefficient({2, 0}), 0.3, 1e-10);
  EXPECT_NEAR(f->real.coefficient({1, 1}), -1.7, 1e-10);
  EXPECT_NEAR(f->real.coefficient({0, 0}), 0.01, 1e-10);
}
