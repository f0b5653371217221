#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qlab/circle.hpp"
#include "qlab/error.hpp"
#include "qlab/qindep.hpp"

using namespace qlab;

namespace {

constexpr double kPi = std::numbers::pi;

EvenPolynomial quad(double sigma) { return EvenPolynomial::monomial(2, sigma); }

// 1 + 2 sum_{n >= 1} exp(-phi(n)) cos(n t), summed until the terms vanish.
double theta_density(const EvenPolynomial& phi, double t) {
  double rho = 1.0;
  for (int n = 1; n < 200; ++n) {
    const double c = std::exp(-phi(n));
    if (c < 1e-300) break;
    rho += 2.0 * c * std::cos(n * t);
  }
  return rho;
}

WindowFunction spectrum_window(std::int64_t r, const std::function<Complex(double)>& f) {
  return WindowFunction::sample(r, 1, [&](std::span<const std::int64_t> y) {
    return f(static_cast<double>(y[0]));
  });
}

}  // namespace

TEST(SpectralSum, QuarticMatchesDirectSum) {
  const auto s = spectral_sum(EvenPolynomial::monomial(4, 1.0));
  const double direct = 1.0 + 2.0 * (std::exp(-1.0) + std::exp(-16.0) + std::exp(-81.0));
  EXPECT_NEAR(s.sum, direct, 1e-15);
  EXPECT_NEAR(s.sum, 1.735759, 1e-5);
  EXPECT_EQ(s.truncation, 3);
}

TEST(SummableConstruction, AcceptsQuarticAndPositiveDensity) {
  const auto c = remark7_construct(EvenPolynomial::monomial(4, 1.0));
  EXPECT_NEAR(c.sum, 1.735759, 1e-5);
  EXPECT_GT(c.density.min, 0.0);
  EXPECT_NEAR(c.density.integral, 1.0, 1e-12);
  EXPECT_EQ(c.density.rho.size(), 4096u);
}

TEST(SummableConstruction, GaussianAcceptedAndQuadratic) {
  const auto c = remark7_construct(quad(2.0));
  EXPECT_GT(c.density.min, 0.0);
  const auto logs = c.distribution.log_window(10);
  auto phi = logs.logs;
  for (auto& z : phi.values) z = -z;
  EXPECT_EQ(quadratic_check(phi).residual, 0.0);
}

TEST(SummableConstruction, RejectsWhenTheSumReachesTwo) {
  EXPECT_THROW(remark7_construct(quad(0.01)), ConstructionRejected);
  EXPECT_GT(spectral_sum(quad(0.01)).sum, 2.0);
  EXPECT_THROW(remark7_construct(EvenPolynomial{}), ConstructionRejected);
  EXPECT_THROW(remark7_construct(quad(-1.0)), ConstructionRejected);
}

TEST(SummableConstruction, GateImpliesPositiveDensity) {
  for (double a : {0.3, 0.5, 0.8, 1.0, 2.0}) {
    for (int power : {2, 4, 6}) {
      const auto phi = EvenPolynomial::monomial(power, a);
      const auto s = spectral_sum(phi);
      if (s.sum >= 2.0) {
        EXPECT_THROW(remark7_construct(phi), ConstructionRejected);
        continue;
      }
      EXPECT_GT(remark7_construct(phi).density.min, 0.0) << phi.to_string();
    }
  }
}

TEST(DensityGrid, Examples) {
  const auto haar = CircleDistribution::from_spectrum(CircleSpectrum::haar_measure(), "haar");
  const auto h = density_grid(haar);
  for (double r : h.rho) ASSERT_NEAR(r, 1.0, 1e-15);

  const auto g = CircleDistribution::from_spectrum(CircleSpectrum::gaussian(0.0, 1.0), "g");
  const auto d = density_grid(g, 512);
  ASSERT_EQ(d.rho.size(), 512u);
  for (std::size_t k = 0; k < d.rho.size(); ++k) {
    const double t = 2.0 * kPi * static_cast<double>(k) / 512.0;
    ASSERT_NEAR(d.rho[k], theta_density(quad(1.0), t), 1e-12);
  }
  EXPECT_GT(d.min, 0.0);
}

TEST(CircleDistribution, RejectsInvalidInput) {
  EXPECT_THROW(CircleDistribution::from_spectrum({0.0, EvenPolynomial{}, false}, "flat"),
               ConstructionRejected);
  EXPECT_THROW(CircleDistribution::from_coefficients({0.1, 0.5, 0.1}, "c0"), InvalidDistribution);
  EXPECT_NO_THROW(CircleDistribution::from_coefficients({0.25, 1.0, 0.25}, "ok"));
}

TEST(SumDifferenceWitnessFormula, Examples) {
  EXPECT_TRUE(remark5_q(quad(1.5), quad(1.5)).pruned(1e-12).is_zero());
  EXPECT_LT(remark5_q(quad(1.0), quad(2.0)).max_coefficient_diff(Polynomial::monomial({1, 1}, 2.0)),
            1e-15);
  const auto phi = EvenPolynomial::monomial(4, 1.0);
  EXPECT_LT(remark5_q(phi, phi).max_coefficient_diff(Polynomial::monomial({2, 2}, -12.0)), 1e-15);
}

TEST(SumDifferenceWitnessFormula, VanishesExactlyForEqualQuadratics) {
  const std::vector<double> grid{0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
  for (double a : grid) {
    for (double b : grid) {
      EXPECT_EQ(remark5_q(quad(a), quad(b)).pruned(1e-12).is_zero(), a == b);
    }
  }
}

TEST(SumDifferenceJoint, WitnessMatchesClosedForm) {
  const std::vector<EvenPolynomial> phis{
      quad(1.0), quad(2.0), EvenPolynomial::monomial(4, 1.0),
      EvenPolynomial::monomial(4, 1.0) + quad(1.0)};
  for (const auto& phi : phis) {
    const auto g = CircleDistribution::from_spectrum({0.0, phi, false}, phi.to_string());
    const auto w = extract_q_witness(sum_difference_joint(g, g, 6));
    ASSERT_TRUE(w) << phi.to_string();
    EXPECT_LT(w->real.max_coefficient_diff(remark5_q(phi, phi)), 1e-8) << phi.to_string();
  }
}

TEST(SumDifferenceJoint, HaarPairGivesIndicatorOfOrigin) {
  const auto m = CircleDistribution::from_spectrum(CircleSpectrum::haar_measure(), "haar");
  const auto j = sum_difference_joint(m, m, 3).joint.values();
  for (std::size_t i = 0; i < j.values.size(); ++i) {
    const auto p = j.box.point(i);
    EXPECT_EQ(j.values[i], Complex(p[0] == 0 && p[1] == 0 ? 1.0 : 0.0, 0.0));
  }
}

TEST(CircleDistribution, ExplicitCoefficientsNeedNonnegativeDensity) {
  // A truncated all-ones sequence is a Dirichlet kernel, negative somewhere.
  EXPECT_THROW(CircleDistribution::from_coefficients(std::vector<Complex>(13, 1.0), "dirichlet"),
               ConstructionRejected);
}

TEST(GaussianCheckT, Examples) {
  // Linear inputs stay above the modulus floor only on small windows.
  const auto pass = gaussian_check_T(spectrum_window(3, [](double n) {
    return std::exp(Complex(-2.0 * n * n, n * kPi / 3.0));
  }));
  EXPECT_TRUE(pass.gaussian);
  EXPECT_NEAR(pass.shift, kPi / 3.0, 1e-9);
  EXPECT_NEAR(pass.sigma, 2.0, 1e-9);

  const auto fail = gaussian_check_T(spectrum_window(2, [](double n) {
    return Complex(std::exp(-n * n * n * n), 0.0);
  }));
  EXPECT_FALSE(fail.gaussian);
  EXPECT_GE(fail.quadratic_residual, 12.0);

  const auto one = gaussian_check_T(spectrum_window(8, [](double) { return Complex(1.0, 0.0); }));
  EXPECT_TRUE(one.gaussian);
  EXPECT_EQ(one.sigma, 0.0);
  EXPECT_EQ(one.shift, 0.0);
}

TEST(GaussianCheckT, ProductOfGaussiansIsGaussian) {
  const std::vector<std::pair<double, double>> params{{0.3, 0.5}, {5.9, 1.0}, {2.0, 0.25}};
  for (const auto& [x1, s1] : params) {
    for (const auto& [x2, s2] : params) {
      const auto a = CircleSpectrum::gaussian(x1, s1), b = CircleSpectrum::gaussian(x2, s2);
      auto logs = WindowFunction::sample(8, 1, [&](std::span<const std::int64_t> n) {
        return a.log_cf(n[0]) + b.log_cf(n[0]);
      });
      const auto fit = gaussian_check_T(LogWindow::from_logs(std::move(logs)));
      ASSERT_TRUE(fit.gaussian);
      EXPECT_NEAR(fit.sigma, s1 + s2, 1e-9);
      EXPECT_NEAR(fit.shift, std::fmod(x1 + x2, 2.0 * kPi), 1e-9);
    }
  }
}
