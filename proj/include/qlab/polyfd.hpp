#pragma once

// Finite differences, the polynomial test Delta_h^{n+1} f = 0, degrees,
// the quadratic functional equation and polynomial fitting on integer boxes.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qlab/group.hpp"
#include "qlab/polynomial.hpp"

namespace qlab {

using Complex = std::complex<double>;
using Point = std::vector<std::int64_t>;

/// Axis-aligned box lo <= y <= hi in Z^m.
struct IntegerBox {
  Point lo;
  Point hi;

  static IntegerBox centered(std::int64_t radius, std::size_t dim);

  std::size_t dim() const { return lo.size(); }
  bool empty() const;
  std::size_t size() const;
  bool contains(std::span<const std::int64_t> y) const;
  /// Row-major index, first axis most significant.
  std::size_t index(std::span<const std::int64_t> y) const;
  Point point(std::size_t i) const;
  /// Largest r with [-r, r]^m inside the box; -1 if the origin is outside.
  std::int64_t radius() const;
  /// {y : y and y + h both in the box}.
  IntegerBox shrink(std::span<const std::int64_t> h) const;

  bool operator==(const IntegerBox&) const = default;
};

struct FiniteFunction {
  FiniteAbelianGroup group;
  std::vector<Complex> values;

  static FiniteFunction sample(const FiniteAbelianGroup& g,
                               const std::function<Complex(Index)>& fn);
  Complex operator[](Index y) const { return values[y]; }
};

struct WindowFunction {
  IntegerBox box;
  std::vector<Complex> values;

  static WindowFunction sample(
      std::int64_t radius, std::size_t dim,
      const std::function<Complex(std::span<const std::int64_t>)>& fn);
  static WindowFunction sample(
      const IntegerBox& box,
      const std::function<Complex(std::span<const std::int64_t>)>& fn);
  Complex at(std::span<const std::int64_t> y) const;
  double max_abs() const;
};

/// (Delta_h f)(y) = f(y + h) - f(y).
FiniteFunction delta(const FiniteFunction& f, Index h);
/// The result lives on the shrunk box; throws WindowExhausted when empty.
WindowFunction delta(const WindowFunction& f, std::span<const std::int64_t> h);

/// Delta_{h_1} ... Delta_{h_k} f (mixed differences).
FiniteFunction apply_differences(const FiniteFunction& f,
                                 const std::vector<Index>& shifts);
WindowFunction apply_differences(const WindowFunction& f,
                                 const std::vector<Point>& shifts);

struct PolyTest {
  bool polynomial = false;
  /// max over h of min_{1<=k<=n+1} |Delta_h^k f| / max(1, |Delta_h^{k-1} f|)
  /// (sup norms). An iterate that vanishes stays zero, so the first
  /// vanishing order decides; the scaling keeps the test invariant under the
  /// geometric growth or decay of nonvanishing iterates.
  double residual = 0.0;
};

/// Repeated-h test with every h != 0 of the group.
PolyTest is_polynomial(const FiniteFunction& f, int n, double tol = 1e-10);
/// Every h != 0 whose (n+1)-fold shift fits in the box. Throws
/// WindowExhausted when the box radius is below n + 2.
PolyTest is_polynomial(const WindowFunction& f, int n, double tol = 1e-8);

struct PolynomialFit {
  int degree = 0;
  Polynomial real;
  Polynomial imag;
  double max_error = 0.0;
  /// Coefficients come from exact rational elimination.
  bool exact = false;
};

struct PolynomialCertificate {
  int degree = 0;
  double residual = 0.0;
  std::optional<PolynomialFit> fit;  // windows only
};

std::optional<PolynomialCertificate> min_degree(const FiniteFunction& f,
                                                int n_max, double tol = 1e-10);
std::optional<PolynomialCertificate> min_degree(const WindowFunction& f,
                                                int n_max, double tol = 1e-8);

struct ConstancyVerdict {
  bool constant = false;
  bool polynomial = false;
  int degree = -1;  // smallest accepted n, -1 if none up to the depth
  int depth = 0;    // largest n tested
  double residual = 0.0;
  /// polynomial <=> constant, as a compact domain forces.
  bool consistent() const { return polynomial == constant; }
};

/// Tests f for polynomiality with n up to min(|G|, 64) and compares with
/// constancy.
ConstancyVerdict lemma5_constancy(const FiniteFunction& f, double tol = 1e-10);

struct QuadraticResidual {
  double residual = 0.0;
  Point u;  // where the maximum is attained
  Point v;
};

/// max |phi(u+v) + phi(u-v) - 2 phi(u) - 2 phi(v)|. Requires phi real,
/// phi(0) = 0 and phi(-y) = phi(y).
QuadraticResidual quadratic_check(const FiniteFunction& phi);
/// Over all u, v with u, v, u + v, u - v in the window.
QuadraticResidual quadratic_check(const WindowFunction& phi);

/// Fits real and imaginary parts with classical polynomials of minimal total
/// degree <= min(d_max, radius - 2). Integer-valued inputs are solved exactly
/// over the rationals; otherwise by least squares.
std::optional<PolynomialFit> fit_polynomial_window(const WindowFunction& f,
                                                   int d_max,
                                                   double tol = 1e-8);

}  // namespace qlab
