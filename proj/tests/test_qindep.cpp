#include <gtest/gtest.h>

#include "qlab/circle.hpp"
#include "qlab/error.hpp"
#include "qlab/qindep.hpp"
#include "qlab/rng.hpp"
#include "qlab/scenario.hpp"

using namespace qlab;

namespace {

CircleDistribution gaussian(double sigma, double shift = 0.0) {
  return CircleDistribution::from_spectrum(CircleSpectrum::gaussian(shift, sigma), "test");
}

FiniteFunction zero_on(const FiniteAbelianGroup& g) {
  return FiniteFunction::sample(g, [](Index) { return Complex{0.0, 0.0}; });
}

// J(u, v) -> J(v, u) with the marginals exchanged.
WindowJoint swapped(const WindowJoint& j) {
  const auto& src = j.joint.logs;
  auto logs = WindowFunction::sample(src.box, [&](std::span<const std::int64_t> y) {
    const Point p{y[1], y[0]};
    return src.at(p);
  });
  return {LogWindow::from_logs(std::move(logs)), {j.marginals[1], j.marginals[0]}};
}

}  // namespace

TEST(VerifyQIndependence, FiniteExamples) {
  const FiniteAbelianGroup z3({3});
  Rng rng(1);
  const JointDistribution product(std::vector<Distribution>{
      Distribution(z3, rng.simplex(3)), Distribution(z3, rng.simplex(3))});
  EXPECT_LT(verify_q_independence(product, zero_on(product.product_group())), 1e-15);

  // Mass 1/3 on the diagonal x_1 = x_2.
  const JointDistribution diag({z3, z3}, {1.0 / 3, 0, 0, 0, 1.0 / 3, 0, 0, 0, 1.0 / 3});
  EXPECT_GT(verify_q_independence(diag, zero_on(diag.product_group())), 0.1);
}

TEST(VerifyQIndependence, SumDifferenceJointWithClosedFormWitness) {
  const auto phi1 = EvenPolynomial::monomial(2, 1.0);
  const auto phi2 = EvenPolynomial::monomial(2, 2.0) + EvenPolynomial::monomial(4, 0.1);
  const auto g1 = CircleDistribution::from_spectrum({0.0, phi1, false}, "g1");
  const auto g2 = CircleDistribution::from_spectrum({0.0, phi2, false}, "g2");
  const auto j = sum_difference_joint(g1, g2, 5);
  const auto r = verify_q_independence(j, remark5_q(phi1, phi2), Polynomial(2));
  EXPECT_LT(r.residual, 1e-9);
  EXPECT_LT(r.log_residual, 1e-9);
}

TEST(ExtractQWitness, FiniteExamples) {
  const FiniteAbelianGroup z4({4}), z2({2});
  const JointDistribution product(std::vector<Distribution>{
      Distribution(z4, {0.1, 0.2, 0.3, 0.4}), Distribution::uniform(z2)});
  const auto w = extract_q_witness(product);
  ASSERT_TRUE(w);
  EXPECT_TRUE(w->is_zero());
  const JointDistribution corr({z2, z2}, {0.4, 0.1, 0.1, 0.4});
  EXPECT_FALSE(extract_q_witness(corr));
}

TEST(ExtractQWitness, SucceedsExactlyOnProductsUpToOrder144) {
  Rng rng(2);
  const auto gs = groups_up_to(12);
  std::size_t products = 0, others = 0;
  for (const auto& a : gs) {
    for (const auto& b : gs) {
      if (a.size() * b.size() > 144) continue;
      for (int i = 0; i < 4; ++i) {
        const Distribution ma(a, rng.simplex(a.size())), mb(b, rng.simplex(b.size()));
        const JointDistribution j =
            i % 2 == 0 ? JointDistribution(std::vector<Distribution>{ma, mb})
                       : JointDistribution({a, b}, rng.simplex(a.size() * b.size()));
        const bool factorizes = j.independence_defect() <= 1e-9;
        const auto w = extract_q_witness(j);
        ASSERT_EQ(w.has_value(), factorizes) << a.to_string() << " x " << b.to_string();
        if (w) {
          ASSERT_LT(verify_q_independence(j, zero_on(j.product_group())), 1e-9);
          ++products;
        } else {
          ++others;
        }
      }
    }
  }
  EXPECT_GT(products, 0u);
  EXPECT_GT(others, 0u);
}

TEST(ExtractQWitness, WindowExamples) {
  for (const auto& [s1, s2] : std::vector<std::pair<double, double>>{{1, 1}, {0.5, 2}, {2, 1}}) {
    const auto j = sum_difference_joint(gaussian(s1), gaussian(s2), 6);
    const auto w = extract_q_witness(j);
    ASSERT_TRUE(w);
    EXPECT_LT(w->real.max_coefficient_diff(Polynomial::monomial({1, 1}, 2.0 * (s2 - s1))), 1e-8);
    EXPECT_TRUE(w->imag.pruned(1e-8).is_zero());
    EXPECT_EQ(w->real.pruned(1e-8).is_zero(), s1 == s2);
  }
  const auto phi = EvenPolynomial::monomial(4, 1.0);
  const auto g = remark7_construct(phi).distribution;
  const auto w = extract_q_witness(sum_difference_joint(g, g, 6));
  ASSERT_TRUE(w);
  EXPECT_LT(w->real.max_coefficient_diff(Polynomial::monomial({2, 2}, -12.0)), 1e-8);
}

TEST(ExtractQWitness, WindowWitnessIsUnique) {
  const auto phi = EvenPolynomial::monomial(2, 0.7) + EvenPolynomial::monomial(4, 0.05);
  const auto g = CircleDistribution::from_spectrum({0.3, phi, false}, "g");
  const auto j = sum_difference_joint(g, gaussian(1.1, 2.0), 6);
  const auto a = extract_q_witness(j, 4);
  const auto b = extract_q_witness(j, 8);
  ASSERT_TRUE(a && b);
  for (std::int64_t u = -6; u <= 6; ++u) {
    for (std::int64_t v = -6; v <= 6; ++v) {
      const std::vector<std::int64_t> p{u, v};
      ASSERT_NEAR(a->real.at(p), b->real.at(p), 1e-8);
      ASSERT_NEAR(a->imag.at(p), b->imag.at(p), 1e-8);
    }
  }
}

TEST(ExtractQWitness, PermutingComponentsPermutesTheWitness) {
  const auto j = sum_difference_joint(gaussian(0.5, 1.0), gaussian(1.5, 0.2), 5);
  const auto w = extract_q_witness(j);
  const auto ws = extract_q_witness(swapped(j));
  ASSERT_TRUE(w && ws);
  for (std::int64_t u = -5; u <= 5; ++u) {
    for (std::int64_t v = -5; v <= 5; ++v) {
      const std::vector<std::int64_t> p{u, v}, q{v, u};
      ASSERT_NEAR(ws->real.at(p), w->real.at(q), 1e-8);
      ASSERT_NEAR(ws->imag.at(p), w->imag.at(q), 1e-8);
    }
  }
}

TEST(ExtractQWitness, VanishingSpectrumHasNoLog) {
  const auto j = sum_difference_joint(
      CircleDistribution::from_spectrum(CircleSpectrum::haar_measure(), "haar"), gaussian(1.0), 3);
  EXPECT_THROW(extract_q_witness(j), UndefinedLog);
}

TEST(QIdenticalWitness, Examples) {
  const FiniteAbelianGroup z5({5});
  Rng rng(3);
  const auto f = char_fn(Distribution(z5, rng.simplex(5)));
  const auto same = q_identical_witness(f, f);
  ASSERT_TRUE(same);
  EXPECT_TRUE(same->is_zero());
  EXPECT_FALSE(q_identical_witness(char_fn(Distribution::degenerate(z5, 1)),
                                   char_fn(Distribution::degenerate(z5, 2))));

  const auto a = CircleSpectrum::gaussian(0.0, 0.5).log_window(8);
  const auto b = CircleSpectrum::gaussian(0.0, 2.0).log_window(8);
  const auto w = q_identical_witness(a, b);
  ASSERT_TRUE(w);
  EXPECT_LT(w->real.max_coefficient_diff(Polynomial::monomial({2}, 1.5)), 1e-8);
}

TEST(UnwrapPhase, FollowsLinearPhase) {
  const auto s = CircleSpectrum::gaussian(2.5, 0.01);
  const auto f = s.log_window(20);
  const auto u = unwrap_phase(f.logs, false);
  for (std::int64_t n = -20; n <= 20; ++n) {
    const Point p{n};
    EXPECT_NEAR(u.at(p).imag(), 2.5 * static_cast<double>(n), 1e-9);
  }
}
