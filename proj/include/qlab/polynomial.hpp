#pragma once

// Sparse classical polynomials in a fixed number of real variables.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace qlab {

using Exponent = std::vector<int>;

/// Total degree first, then lexicographic with the first exponent
/// descending: 1, u, v, u^2, uv, v^2, ...
struct MonomialOrder {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

/// Every monomial of total degree <= d in `dim` variables, in MonomialOrder.
std::vector<Exponent> monomials_up_to(std::size_t dim, int d);

class Polynomial {
 public:
  using Terms = std::map<Exponent, double, MonomialOrder>;

  explicit Polynomial(std::size_t dim = 0) : dim_(dim) {}

  static Polynomial constant(std::size_t dim, double c);
  static Polynomial variable(std::size_t dim, std::size_t i);
  static Polynomial monomial(Exponent e, double c);

  std::size_t dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  double coefficient(const Exponent& e) const;
  /// Zero coefficients are removed.
  void set(const Exponent& e, double c);

  bool is_zero() const { return terms_.empty(); }
  /// Total degree; 0 for the zero polynomial.
  int degree() const;

  double operator()(std::span<const double> x) const;
  double at(std::span<const std::int64_t> x) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  Polynomial operator-() const { return *this * -1.0; }

  /// Drops coefficients with |c| <= tol.
  Polynomial pruned(double tol) const;
  /// max |coefficient difference| over the union of supports.
  double max_coefficient_diff(const Polynomial& o) const;

  /// e.g. "-12*u^2*v^2"; variables are u, v, w, then x3, x4, ...
  std::string to_string() const;

 private:
  std::size_t dim_;
  Terms terms_;
};

/// sum_k coeffs[k] * arg^k.
Polynomial compose(const std::map<int, double>& coeffs, const Polynomial& arg);

}  // namespace qlab
