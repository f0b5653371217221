#pragma once

// Probability distributions on finite abelian groups and their
// characteristic functions f(y) = sum_x (x, y) mu(x).

#include <complex>
#include <optional>
#include <vector>

#include "qlab/group.hpp"

namespace qlab {

using Complex = std::complex<double>;

class Distribution {
 public:
  /// Entries must be >= 0 and sum to 1 within 1e-12.
  Distribution(FiniteAbelianGroup group, std::vector<double> probs);

  static Distribution degenerate(const FiniteAbelianGroup& g, Index x);
  static Distribution uniform(const FiniteAbelianGroup& g);

  const FiniteAbelianGroup& group() const { return group_; }
  const std::vector<double>& probs() const { return probs_; }
  double operator[](Index x) const { return probs_[x]; }
  /// Elements with mass above `floor`.
  std::vector<Index> support(double floor = 1e-12) const;

 private:
  FiniteAbelianGroup group_;
  std::vector<double> probs_;
};

struct CharacteristicFunction {
  FiniteAbelianGroup group;  // dual index set
  std::vector<Complex> values;

  Complex operator[](Index y) const { return values[y]; }
  std::size_t size() const { return values.size(); }
};

CharacteristicFunction char_fn(const Distribution& mu);

/// Fourier inversion. Throws NotPositiveDefinite when some mass is below
/// -1e-9 and InvalidDistribution when f(0) != 1 or f is not Hermitian.
Distribution inverse_char_fn(const CharacteristicFunction& f);

/// Raw inverse transform (real parts), without positivity checks.
std::vector<double> inverse_transform(const CharacteristicFunction& f);

Distribution convolve(const Distribution& mu, const Distribution& nu);

/// Pointwise product of characteristic functions on the same dual.
CharacteristicFunction multiply(const CharacteristicFunction& a,
                                const CharacteristicFunction& b);

double max_abs_diff(const CharacteristicFunction& a,
                    const CharacteristicFunction& b);
double max_abs_diff(const Distribution& a, const Distribution& b);

/// Uniform distribution m_K on the subgroup.
Distribution haar(const Subgroup& k);
/// Indicator of A(Y, K).
CharacteristicFunction haar_cf(const Subgroup& k);

/// A(X, E) with E = {y : f(y) = 1 within 1e-9}; throws NumericalInconsistency
/// if some mass lies outside the bound or E is not a subgroup.
Subgroup support_bound(const Distribution& mu);

struct ShiftFactor {
  Index x;     // minimal representative modulo k
  Subgroup k;  // mu = E_x * m_k
};

/// Finds mu = E_x * m_K when |f| is {0,1}-valued, N = {f != 0} is a
/// subgroup and f restricted to N is a character.
std::optional<ShiftFactor> idempotent_shift_factor(const Distribution& mu);

/// mu is the Haar distribution of a Corwin subgroup.
bool is_corwin_haar(const Distribution& mu);

Distribution push_forward(const Distribution& mu, const GroupHom& alpha);

class JointDistribution {
 public:
  /// `probs` is indexed by the product group of `groups` (first factor most
  /// significant).
  JointDistribution(std::vector<FiniteAbelianGroup> groups,
                    std::vector<double> probs);
  explicit JointDistribution(std::vector<Distribution> marginals);  // product

  const std::vector<FiniteAbelianGroup>& groups() const { return groups_; }
  std::size_t arity() const { return groups_.size(); }
  const Distribution& as_distribution() const { return dist_; }
  const FiniteAbelianGroup& product_group() const { return dist_.group(); }

  Distribution marginal(std::size_t j) const;
  std::vector<Distribution> marginals() const;
  /// Component indices of a product element.
  std::vector<Index> split(Index joint) const;
  Index combine(const std::vector<Index>& parts) const;
  /// max |J - product of marginals|.
  double independence_defect() const;

 private:
  std::vector<FiniteAbelianGroup> groups_;
  Distribution dist_;
  std::vector<std::size_t> block_;  // product-index stride of each component
};

/// Joint law of (sum_j rows[i][j] xi_j)_i for xi distributed as `j`.
JointDistribution linear_form_joint(const JointDistribution& j,
                                    const std::vector<std::vector<GroupHom>>& rows);

}  // namespace qlab
