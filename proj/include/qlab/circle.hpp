#pragma once

// Distributions on the circle group T through their characteristic
// sequences on the dual Z, with the pairing (x, n) = exp(i n x).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlab/polyfd.hpp"
#include "qlab/polynomial.hpp"
#include "qlab/qindep.hpp"

namespace qlab {

/// phi(n) = sum_k a_k n^k over even k >= 2.
struct EvenPolynomial {
  std::map<int, double> coeffs;

  static EvenPolynomial monomial(int power, double c);
  double operator()(double n) const;
  /// Leading coefficient; 0 for the zero polynomial.
  double leading() const;
  /// phi(arg) as a classical polynomial.
  Polynomial compose_linear(const Polynomial& arg) const;
  EvenPolynomial operator+(const EvenPolynomial& o) const;
  std::string to_string() const;
  bool operator==(const EvenPolynomial&) const = default;
};

/// Spectral data exp{i n x - phi(n)}, or the Haar sequence 1{n = 0}. No
/// positivity is assumed; see CircleDistribution.
struct CircleSpectrum {
  double shift = 0.0;  // angle in [0, 2 pi)
  EvenPolynomial phi;
  bool haar = false;

  static CircleSpectrum gaussian(double shift, double sigma);
  static CircleSpectrum haar_measure();
  Complex log_cf(std::int64_t n) const;
  Complex cf(std::int64_t n) const;
  /// Complex logs on the window [-radius, radius]^1.
  LogWindow log_window(std::int64_t radius) const;
  bool operator==(const CircleSpectrum&) const = default;
};

struct DensityReport {
  std::vector<double> rho;  // rho(2 pi k / M)
  double min = 0.0;
  std::size_t argmin = 0;
  /// Mean of rho over the grid, i.e. the total mass.
  double integral = 0.0;
};

/// Validated distribution on T: either analytic spectral data or an explicit
/// coefficient list c_n, |n| <= N.
class CircleDistribution {
 public:
  /// Requires summable analytic data (phi with positive leading coefficient,
  /// or Haar); the density is checked on the 4096 grid.
  static CircleDistribution from_spectrum(const CircleSpectrum& s,
                                          std::string provenance);
  /// c_0 = 1, Hermitian; the truncation is N = (coeffs.size() - 1) / 2.
  static CircleDistribution from_coefficients(std::vector<Complex> coeffs,
                                              std::string provenance);

  std::int64_t truncation() const { return truncation_; }
  /// Tail bound sum_{|n| > N} |c_n| of the analytic data.
  double tail() const { return tail_; }
  const std::string& provenance() const { return provenance_; }
  const std::optional<CircleSpectrum>& spectrum() const { return spectrum_; }

  Complex cf(std::int64_t n) const;
  Complex log_cf(std::int64_t n) const;
  /// Largest window radius usable for sum/difference arguments. Analytic
  /// data are exact for every n; explicit coefficients allow N / 2.
  std::int64_t max_window_radius() const;
  LogWindow log_window(std::int64_t radius) const;

 private:
  CircleDistribution() = default;

  std::optional<CircleSpectrum> spectrum_;
  std::vector<Complex> coeffs_;  // index n + N
  std::int64_t truncation_ = 0;
  double tail_ = 0.0;
  std::string provenance_;
};

/// Smallest N with exp{-phi(n)} < eps for every n >= N, plus the full sum
/// sum_{n in Z} exp{-phi(n)}. Requires a positive leading coefficient.
struct SpectralSum {
  std::int64_t truncation = 0;
  double sum = 0.0;
  double tail = 0.0;  // sum over |n| >= truncation
};
SpectralSum spectral_sum(const EvenPolynomial& phi, double eps = 1e-15);

/// Density sum_{|n| <= N} c_n exp(-i n t) on a uniform grid of M points.
/// Requires M >= 4N.
DensityReport density_grid(const CircleDistribution& g, std::size_t m = 4096);

struct SummableConstruction {
  CircleDistribution distribution;
  double sum = 0.0;
  DensityReport density;
};

/// gamma^(n) = exp{-phi(n)}; accepted iff sum_n exp{-phi(n)} < 2, which
/// makes the density 1 + 2 sum_{n>0} exp{-phi(n)} cos(nt) strictly positive.
/// Throws ConstructionRejected with the computed sum otherwise.
SummableConstruction remark7_construct(const EvenPolynomial& phi);

/// q(u, v) = -phi1(u+v) - phi2(u-v) + phi1(u) + phi2(u) + phi1(v) + phi2(v).
Polynomial remark5_q(const EvenPolynomial& phi1, const EvenPolynomial& phi2);

/// Spectral joint of (xi_1 + xi_2, xi_1 - xi_2) on [-radius, radius]^2:
/// J(u, v) = g1(u+v) g2(u-v); marginals J(u, 0) and J(0, v).
WindowJoint sum_difference_joint(const CircleDistribution& g1,
                                 const CircleDistribution& g2,
                                 std::int64_t radius);

struct GaussianFitT {
  bool gaussian = false;
  double shift = 0.0;  // in [0, 2 pi)
  double sigma = 0.0;
  double quadratic_residual = 0.0;
  Point quadratic_at_u;
  Point quadratic_at_v;
  double phase_residual = 0.0;  // distance of the unwrapped phase from linear
};

/// Gaussian test on a window of Z: -log|f| must satisfy the quadratic
/// equation with residual < tol and the unwrapped phase must be linear in n.
/// Throws UndefinedLog when f vanishes on the window.
GaussianFitT gaussian_check_T(const LogWindow& f, double tol = 1e-8);
GaussianFitT gaussian_check_T(const WindowFunction& f, double tol = 1e-8);

}  // namespace qlab
