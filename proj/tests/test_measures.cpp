#include <gtest/gtest.h>

#include "brute.hpp"
#include "qlab/error.hpp"
#include "qlab/measures.hpp"
#include "qlab/rng.hpp"
#include "qlab/scenario.hpp"

using namespace qlab;

namespace {

Index el(const FiniteAbelianGroup& g, std::vector<std::int64_t> c) {
  return g.index_of(GroupElement{std::move(c)});
}

Subgroup sub(const FiniteAbelianGroup& g, std::vector<std::int64_t> cs) {
  std::vector<Index> e;
  for (auto c : cs) e.push_back(el(g, {c}));
  return Subgroup(g, e);
}

void expect_values(const CharacteristicFunction& f, std::vector<Complex> want, double tol) {
  ASSERT_EQ(f.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(std::abs(f[i] - want[i]), 0.0, tol);
}

double dist(const Distribution& a, const Distribution& b) { return max_abs_diff(a, b); }

}  // namespace

TEST(Distribution, Validation) {
  const FiniteAbelianGroup z3({3});
  EXPECT_THROW(Distribution(z3, {0.5, 0.5, 0.5}), InvalidDistribution);
  EXPECT_THROW(Distribution(z3, {1.2, -0.2, 0.0}), InvalidDistribution);
  EXPECT_THROW(Distribution(z3, {0.5, 0.5}), InvalidDistribution);
  EXPECT_NO_THROW(Distribution(z3, {0.25, 0.25, 0.5}));
}

TEST(CharFn, Examples) {
  const FiniteAbelianGroup z5({5});
  const auto f = char_fn(Distribution::degenerate(z5, 3));
  for (Index y = 0; y < 5; ++y) {
    EXPECT_NEAR(std::abs(f[y] - z5.pairing(3, y)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f[y]), 1.0, 1e-15);
  }
  expect_values(char_fn(Distribution::uniform(FiniteAbelianGroup({3}))), {1, 0, 0}, 1e-15);
  const FiniteAbelianGroup z4({4});
  expect_values(char_fn(haar(sub(z4, {0, 2}))), {1, 0, 1, 0}, 1e-15);
}

TEST(CharFn, MatchesDirectSummation) {
  Rng rng(11);
  for (const auto& g : groups_up_to(24)) {
    const Distribution mu(g, rng.simplex(g.size()));
    const auto fast = char_fn(mu);
    const auto slow = brute::char_fn(mu);
    for (Index y = 0; y < g.size(); ++y) {
      ASSERT_NEAR(std::abs(fast[y] - slow[y]), 0.0, 1e-12) << g.to_string();
    }
  }
}

TEST(InverseCharFn, Examples) {
  const FiniteAbelianGroup z4({4}), z2({2});
  CharacteristicFunction one{z4, {1, 1, 1, 1}};
  EXPECT_LT(dist(inverse_char_fn(one), Distribution::degenerate(z4, 0)), 1e-15);
  CharacteristicFunction ind{z4, {1, 0, 1, 0}};
  EXPECT_LT(dist(inverse_char_fn(ind), haar(sub(z4, {0, 2}))), 1e-15);
  CharacteristicFunction flip{z2, {1, -1}};
  EXPECT_LT(dist(inverse_char_fn(flip), Distribution::degenerate(z2, 1)), 1e-15);
}

TEST(InverseCharFn, RejectsNonPositiveDefinite) {
  const FiniteAbelianGroup z3({3});
  EXPECT_THROW(inverse_char_fn({z3, {1, 1.5, 1.5}}), NotPositiveDefinite);
  EXPECT_THROW(inverse_char_fn({z3, {0.5, 0, 0}}), InvalidDistribution);
}

TEST(InverseCharFn, RoundTripUpTo64) {
  Rng rng(5);
  for (const auto& g : groups_up_to(64)) {
    const Distribution mu(g, rng.simplex(g.size()));
    ASSERT_LT(dist(inverse_char_fn(char_fn(mu)), mu), 1e-12) << g.to_string();
  }
}

TEST(Convolution, Theorem) {
  Rng rng(3);
  for (const auto& g : groups_up_to(16)) {
    for (int i = 0; i < 100; ++i) {
      const Distribution mu(g, rng.simplex(g.size()));
      const Distribution nu(g, rng.simplex(g.size()));
      ASSERT_LT(max_abs_diff(char_fn(convolve(mu, nu)), multiply(char_fn(mu), char_fn(nu))),
                1e-12);
    }
  }
}

TEST(Convolution, PointMassesAdd) {
  const FiniteAbelianGroup g({3, 4});
  const auto a = el(g, {1, 3}), b = el(g, {2, 2});
  EXPECT_LT(dist(convolve(Distribution::degenerate(g, a), Distribution::degenerate(g, b)),
                 Distribution::degenerate(g, brute::add(g, a, b))),
            1e-15);
}

TEST(Haar, Examples) {
  const FiniteAbelianGroup z4({4});
  expect_values(char_fn(haar(Subgroup::trivial(z4))), {1, 1, 1, 1}, 1e-15);
  expect_values(char_fn(haar(Subgroup::whole(z4))), {1, 0, 0, 0}, 1e-15);
  expect_values(haar_cf(sub(z4, {0, 2})), {1, 0, 1, 0}, 1e-15);
}

TEST(Haar, IndicatorOfAnnihilatorMatchesSummation) {
  for (const auto& g : groups_up_to(32)) {
    for (const auto& k : all_subgroups(g)) {
      const auto ind = haar_cf(k);
      const auto slow = brute::char_fn(haar(k));
      for (Index y = 0; y < g.size(); ++y) {
        ASSERT_NEAR(std::abs(ind[y] - slow[y]), 0.0, 1e-12) << g.to_string();
      }
    }
  }
}

TEST(SupportBound, Examples) {
  const FiniteAbelianGroup z4({4}), z3({3});
  EXPECT_EQ(support_bound(Distribution::degenerate(z4, 0)), Subgroup::trivial(z4));
  const auto k = sub(z4, {0, 2});
  EXPECT_EQ(support_bound(haar(k)), k);
  EXPECT_EQ(support_bound(Distribution(z3, {0.5, 0.2, 0.3})), Subgroup::whole(z3));
}

TEST(IdempotentShiftFactor, Examples) {
  const FiniteAbelianGroup z5({5}), z4({4}), z3({3});
  const auto e3 = idempotent_shift_factor(Distribution::degenerate(z5, 3));
  ASSERT_TRUE(e3);
  EXPECT_EQ(e3->x, 3u);
  EXPECT_EQ(e3->k.size(), 1u);

  const auto k = sub(z4, {0, 2});
  const auto mu = convolve(Distribution::degenerate(z4, 1), haar(k));
  const auto f = idempotent_shift_factor(mu);
  ASSERT_TRUE(f);
  EXPECT_EQ(f->k, k);
  EXPECT_TRUE(k.contains(z4.sub(f->x, 1)));

  EXPECT_FALSE(idempotent_shift_factor(Distribution(z3, {0.5, 0.25, 0.25})));
}

TEST(IdempotentShiftFactor, SucceedsExactlyWhenReconstructionMatches) {
  Rng rng(9);
  for (const auto& g : groups_up_to(16)) {
    std::vector<Distribution> cases;
    for (const auto& k : all_subgroups(g)) {
      cases.push_back(convolve(Distribution::degenerate(g, rng.below(g.size())), haar(k)));
    }
    cases.emplace_back(g, rng.simplex(g.size()));
    for (const auto& mu : cases) {
      const auto f = idempotent_shift_factor(mu);
      bool splits = false;
      for (const auto& k : all_subgroups(g)) {
        for (Index x = 0; x < g.size() && !splits; ++x) {
          splits = dist(convolve(Distribution::degenerate(g, x), haar(k)), mu) < 1e-12;
        }
      }
      ASSERT_EQ(f.has_value(), splits) << g.to_string();
      if (f) {
        EXPECT_LT(dist(convolve(Distribution::degenerate(g, f->x), haar(f->k)), mu), 1e-12);
      }
    }
  }
}

TEST(PushForward, Examples) {
  const FiniteAbelianGroup z5({5});
  Rng rng(1);
  const Distribution mu(z5, rng.simplex(5));
  EXPECT_LT(dist(push_forward(mu, GroupHom::identity(z5)), mu), 1e-15);
  EXPECT_LT(dist(push_forward(Distribution::degenerate(z5, 2), multiplication_map(z5, -1)),
                 Distribution::degenerate(z5, 3)),
            1e-15);
}

TEST(PushForward, TransformIsPrecompositionWithAdjoint) {
  Rng rng(2);
  for (const auto& g : groups_up_to(32)) {
    const Distribution mu(g, rng.simplex(g.size()));
    const auto f = char_fn(mu);
    for (std::int64_t n : {-1, 2, 3, 5}) {
      const auto alpha = multiplication_map(g, n);
      if (!alpha.is_automorphism()) continue;
      const auto a = adjoint(alpha);
      const auto pf = char_fn(push_forward(mu, alpha));
      for (Index y = 0; y < g.size(); ++y) ASSERT_NEAR(std::abs(pf[y] - f[a(y)]), 0.0, 1e-12);
    }
  }
}

TEST(LinearFormJoint, SumAndDifferenceOfPointMasses) {
  const FiniteAbelianGroup z5({5});
  const JointDistribution j(
      std::vector<Distribution>{Distribution::degenerate(z5, 1), Distribution::degenerate(z5, 2)});
  const auto id = GroupHom::identity(z5);
  const auto out = linear_form_joint(j, {{id, id}, {id, -id}});
  EXPECT_LT(max_abs_diff(out.as_distribution(),
                         Distribution::degenerate(out.product_group(), out.combine({3, 4}))),
            1e-15);
}

TEST(JointDistribution, MarginalsAndDefect) {
  const FiniteAbelianGroup z3({3}), z2({2});
  const Distribution a(z3, {0.2, 0.3, 0.5}), b(z2, {0.6, 0.4});
  const JointDistribution p(std::vector<Distribution>{a, b});
  EXPECT_LT(dist(p.marginal(0), a), 1e-15);
  EXPECT_LT(dist(p.marginal(1), b), 1e-15);
  EXPECT_LT(p.independence_defect(), 1e-15);
  const JointDistribution c({z3, z2}, {0.5, 0, 0, 0.25, 0, 0.25});
  EXPECT_GT(c.independence_defect(), 0.1);
  for (Index i = 0; i < 6; ++i) EXPECT_EQ(c.combine(c.split(i)), i);
}
