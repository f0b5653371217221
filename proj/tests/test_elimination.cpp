#include <gtest/gtest.h>

#include "problems.hpp"
#include "qlab/error.hpp"
#include "qlab/polyfd.hpp"

using namespace qlab;

namespace {

WindowFunction window2(std::int64_t radius, const std::function<double(double, double)>& f) {
  return WindowFunction::sample(radius, 2, [&](std::span<const std::int64_t> x) {
    return Complex{f(static_cast<double>(x[0]), static_cast<double>(x[1])), 0.0};
  });
}

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

TEST(SubstituteAndSubtract, WindowExamples) {
  const auto sum = window2(4, [](double u, double v) { return u + v; });
  const auto d = substitute_and_subtract(sum, 1, -1);
  EXPECT_EQ(max_abs(d.values), 0.0);

  const auto prod = window2(4, [](double u, double v) { return u * v; });
  const auto e = substitute_and_subtract(prod, 1, 0);
  for (std::size_t i = 0; i < e.values.size(); ++i) {
    const auto p = e.box.point(i);
    EXPECT_EQ(e.values[i], Complex(static_cast<double>(p[1]), 0.0));
  }
  EXPECT_EQ(e.box.lo[0], -4);
  EXPECT_EQ(e.box.hi[0], 3);
  EXPECT_EQ(e.box.lo[1], -4);
  EXPECT_EQ(e.box.hi[1], 4);
}

TEST(SubstituteAndSubtract, CharacterOfSumKilledByOppositeShift) {
  const FiniteAbelianGroup z5({5});
  const auto g2 = z5.product(z5);
  const auto f = FiniteFunction::sample(g2, [&](Index x) {
    return z5.pairing(2, z5.add(x / 5, x % 5));
  });
  for (Index h = 0; h < 5; ++h) {
    const auto d = substitute_and_subtract(f, z5, h, z5.neg(h));
    EXPECT_LT(max_abs(d.values), 1e-14);
  }
}

TEST(SubstituteAndSubtract, Commutes) {
  const FiniteAbelianGroup z6({6});
  Rng rng(4);
  const auto f = FiniteFunction::sample(z6.product(z6), [&](Index) {
    return Complex(rng.uniform(), rng.uniform());
  });
  for (Index a = 0; a < 6; ++a) {
    for (Index b = 0; b < 6; ++b) {
      const auto x = substitute_and_subtract(substitute_and_subtract(f, z6, a, b), z6, b, 1);
      const auto y = substitute_and_subtract(substitute_and_subtract(f, z6, b, 1), z6, a, b);
      for (std::size_t i = 0; i < x.values.size(); ++i) {
        ASSERT_LT(std::abs(x.values[i] - y.values[i]), 1e-14);
      }
    }
  }
}

TEST(RunLemma3, QuadraticSumAndDifference) {
  // (u + v)^2 + (u - v)^2 = 2u^2 + 2v^2, so R = 0.
  const auto prob = problems::window_shift({{0, 0, 1}, {0, 0, 1}}, {1, -1}, 8, 0);
  const auto t = run_lemma3(prob);
  EXPECT_EQ(t.mode, "lemma3");
  EXPECT_TRUE(t.premise_ok);
  EXPECT_TRUE(t.certified);
  EXPECT_EQ(t.degree_bound, 2);
  ASSERT_TRUE(t.degree);
  EXPECT_EQ(*t.degree, 2);
  EXPECT_EQ(t.order, 4);  // l + n + 2
  EXPECT_FALSE(validate_trace(t, prob));
}

TEST(RunLemma3, ZeroPsi) {
  const auto prob = problems::window_shift({{0}, {0}}, {1, -1}, 6, 0);
  const auto t = run_lemma3(prob);
  EXPECT_TRUE(t.certified);
  EXPECT_EQ(t.final_residual, 0.0);
  ASSERT_TRUE(t.degree);
  EXPECT_EQ(*t.degree, 0);
}

TEST(RunLemma3, QuarticWithMixedRemainder) {
  // (u + v)^4 + (u - v)^4 = 2u^4 + 2v^4 + 12u^2v^2.
  const auto prob = problems::window_shift({{0, 0, 0, 0, 1}, {0, 0, 0, 0, 1}}, {1, -1}, 12, 4);
  const auto want = window2(12, [](double u, double v) { return 12.0 * u * u * v * v; });
  for (std::size_t i = 0; i < want.values.size(); ++i) {
    ASSERT_EQ(prob.r.values[i], want.values[i]);
  }
  const auto t = run_lemma3(prob);
  EXPECT_TRUE(t.certified);
  EXPECT_EQ(t.degree_bound, 4);
  ASSERT_TRUE(t.degree);
  EXPECT_EQ(*t.degree, 4);
  EXPECT_LE(t.required_radius, 12);
  EXPECT_FALSE(validate_trace(t, prob));
}

TEST(RunLemma3, FiniteConstants) {
  const FiniteAbelianGroup z7({7});
  const auto prob = problems::finite_shift(
      z7, {problems::constant(z7, 3.0), problems::constant(z7, {0.5, 2.0})},
      {GroupHom::identity(z7), multiplication_map(z7, 3)}, 0);
  const auto t = run_lemma3(prob);
  EXPECT_TRUE(t.certified);
  ASSERT_TRUE(t.degree);
  EXPECT_EQ(*t.degree, 0);
  EXPECT_FALSE(validate_trace(t, prob));
  EXPECT_EQ(replay_final_residual(t, z7, prob.p), t.final_residual);
}

TEST(RunLemma3, ThreeTermsOnFiniteGroup) {
  const FiniteAbelianGroup z5({5});
  const auto prob = problems::finite_shift(
      z5, {problems::constant(z5, 1.0), problems::constant(z5, 2.0), problems::constant(z5, 4.0)},
      {GroupHom::identity(z5), multiplication_map(z5, 2), multiplication_map(z5, 3)}, 0);
  const auto t = run_lemma3(prob);
  EXPECT_TRUE(t.certified);
  EXPECT_EQ(t.degree_bound, 3);
  EXPECT_FALSE(validate_trace(t, prob));
}

TEST(RunLemma3, ValidateTraceSpotsTampering) {
  const auto prob = problems::window_shift({{0, 0, 1}, {0, 0, 1}}, {1, -1}, 8, 0);
  auto t = run_lemma3(prob);
  ASSERT_FALSE(t.samples.empty());
  ASSERT_FALSE(t.samples[0].steps.empty());
  t.samples[0].steps[0].t = Point{t.samples[0].steps[0].t[0] + 1};
  EXPECT_TRUE(validate_trace(t, prob));
}

TEST(RunLemma3, PerturbationBreaksCertification) {
  const auto loose = problems::window_shift({{0, 0, 1}, {0, 0, 1}}, {1, -1}, 8, 0, 1e-3, 7);
  EliminationOptions opt;
  opt.strict_premise = false;
  const auto t = run_lemma3(loose, opt);
  EXPECT_FALSE(t.certified);
  EXPECT_FALSE(t.premise_ok);
  EXPECT_GE(t.final_residual, 1e-4);
  EXPECT_THROW(run_lemma3(loose), PremiseViolated);
}

TEST(RunLemma3, AnnihilationPremiseIsChecked) {
  // Declaring l = 2 for a quartic remainder leaves Delta^3 R nonzero.
  const auto prob = problems::window_shift({{0, 0, 0, 0, 1}, {0, 0, 0, 0, 1}}, {1, -1}, 12, 2);
  EXPECT_THROW(run_lemma3(prob), PremiseViolated);
  EliminationOptions opt;
  opt.strict_premise = false;
  const auto t = run_lemma3(prob, opt);
  EXPECT_FALSE(t.premise_ok);
  EXPECT_GT(t.r_repeated_residual, 1e-3);
  EXPECT_FALSE(t.certified);
}

TEST(RunLemma3, CertifiedDegreeIsConfirmedIndependently) {
  Rng rng(12);
  for (int i = 0; i < 10; ++i) {
    std::vector<std::vector<double>> psi(2, std::vector<double>(3));
    for (auto& c : psi) {
      for (auto& x : c) x = 2.0 * rng.uniform() - 1.0;
    }
    const auto prob = problems::window_shift(psi, {1, -1}, 8, 2);
    const auto t = run_lemma3(prob);
    ASSERT_TRUE(t.certified);
    const auto c = min_degree(prob.p, t.degree_bound);
    ASSERT_TRUE(c);
    EXPECT_LE(c->degree, t.degree_bound);
    EXPECT_EQ(replay_final_residual(t, prob.radius, prob.p), t.final_residual);
  }
}

TEST(RunHeydeChain, FiniteConstantPair) {
  const FiniteAbelianGroup z5({5});
  const auto prob = problems::finite_heyde(z5, problems::constant(z5, 1.0),
                                           problems::constant(z5, 2.0),
                                           multiplication_map(z5, 2), 0);
  const auto t = run_heyde_chain(prob);
  EXPECT_EQ(t.mode, "heyde");
  EXPECT_TRUE(t.certified);
  ASSERT_TRUE(t.degree);
  EXPECT_EQ(*t.degree, 0);
}

TEST(RunHeydeChain, WindowQuadratic) {
  // psi_1 = y^2: (2u + 2v)^2 = 4u^2 + 4v^2 + 8uv.
  const auto prob = problems::window_heyde({0, 0, 1}, {0}, 6, 2);
  const auto t = run_heyde_chain(prob);
  EXPECT_TRUE(t.certified);
  EXPECT_EQ(t.degree_bound, 2);
  ASSERT_TRUE(t.degree);
  EXPECT_EQ(*t.degree, 2);
}

TEST(RunHeydeChain, PerturbationBreaksCertification) {
  const auto prob = problems::window_heyde({0, 0, 1}, {0}, 6, 2, 1e-3, 3);
  EliminationOptions opt;
  opt.strict_premise = false;
  const auto t = run_heyde_chain(prob, opt);
  EXPECT_FALSE(t.certified);
  EXPECT_GE(t.final_residual, 1e-4);
  EXPECT_THROW(run_heyde_chain(prob), PremiseViolated);
}

TEST(HeydePQ, MatchesDefinition) {
  const FiniteAbelianGroup z7({7});
  Rng rng(8);
  const auto r = [&] { return FiniteFunction::sample(z7, [&](Index) { return rng.uniform(); }); };
  const auto psi1 = r(), psi2 = r();
  const auto b = multiplication_map(z7, 3);
  const auto [p, q] = heyde_pq(z7, psi1, psi2, b);
  for (Index y = 0; y < 7; ++y) {
    EXPECT_EQ(p[y], psi1[z7.scale(y, 4)] + psi2[z7.scale(y, 6)]);
    EXPECT_EQ(q[y], psi1[z7.scale(y, 2)] + psi2[z7.scale(y, 4)]);
  }
}
