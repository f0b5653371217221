#pragma once

// Hypothesis checkers and conclusion extractors for the Q-versions of the
// Cramer, Skitovich-Darmois, Heyde and Kac-Bernstein characterizations.
// On finite groups "Gaussian" means degenerate.

#include <optional>
#include <string>
#include <vector>

#include "qlab/circle.hpp"
#include "qlab/elimination.hpp"
#include "qlab/error.hpp"
#include "qlab/measures.hpp"
#include "qlab/polyfd.hpp"
#include "qlab/tolerance.hpp"

namespace qlab {

/// Ker(I + alpha) != {0}. Carries a nonzero kernel element.
class ConditionViolated : public Error {
 public:
  ConditionViolated(Index kernel_element, bool minus_identity, const std::string& what)
      : Error("condition-violated", what),
        kernel_element_(kernel_element),
        minus_identity_(minus_identity) {}
  Index kernel_element() const noexcept { return kernel_element_; }
  /// alpha = -I, so any i.i.d. nondegenerate pair is a counterexample.
  bool minus_identity() const noexcept { return minus_identity_; }

 private:
  Index kernel_element_;
  bool minus_identity_;
};

struct DegeneracyCheck {
  bool degenerate = false;
  double defect = 0.0;            // max | 1 - |f(y)| |
  std::optional<Index> location; // x with f(y) = (x, y)
};

DegeneracyCheck degeneracy(const CharacteristicFunction& f, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Skitovich-Darmois

/// Linear forms L_1 = sum alpha_j xi_j and L_2 = sum beta_j xi_j of
/// independent xi_j with characteristic functions mu[j].
struct SDInstance {
  FiniteAbelianGroup group;
  std::vector<CharacteristicFunction> mu;
  std::vector<GroupHom> alpha;
  std::vector<GroupHom> beta;
  std::optional<FiniteFunction> q;  // on Y x Y; default 0
};

/// max over Y^2 of |prod mu_j(a_j u + b_j v) - prod mu_j(a_j u) prod mu_j(b_j v) e^q|
/// with a_j, b_j the adjoints of alpha_j, beta_j.
double sd_equation_residual(const SDInstance& inst);

struct SDVerdict {
  double equation_residual = 0.0;
  /// Distinct b = adjoint(alpha_j)^{-1} adjoint(beta_j) and the variables
  /// sharing each.
  std::vector<GroupHom> b;
  std::vector<std::vector<std::size_t>> classes;
  EliminationTrace trace;
  ConstancyVerdict p_constancy;
  std::vector<DegeneracyCheck> factors;
  bool gaussian = false;
};

SDVerdict sd_conclude(const SDInstance& inst, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Heyde

/// Independent xi_1, xi_2 with L_1 = xi_1 + xi_2 and L_2 = xi_1 + alpha xi_2.
struct HeydeInstance {
  FiniteAbelianGroup group;
  Distribution xi1;
  Distribution xi2;
  GroupHom alpha;
  /// Witness of mu_1(u+v) mu_2(u+bv) = mu_1(u-v) mu_2(u-bv) e^{q(u,v)};
  /// extracted from the data when absent.
  std::optional<FiniteFunction> q;
};

/// Ker(I + alpha) = {0}, computed exactly.
bool heyde_condition(const GroupHom& alpha);
std::optional<Index> heyde_kernel_element(const GroupHom& alpha);

/// max |J_(L1,L2) - J_(L1,-L2)| over Y^2.
double heyde_symmetry_residual(const HeydeInstance& inst);

/// The log-ratio witness q on Y^2 when it is a polynomial (on a finite
/// group: constant, hence 0). Throws UndefinedLog on a vanishing value.
std::optional<FiniteFunction> heyde_symmetry_witness(const HeydeInstance& inst,
                                                     const Tolerances& tol = {});
double heyde_witness_residual(const HeydeInstance& inst, const FiniteFunction& q);

/// p(u, v) = q(bu, -u) + q(v, -v) + q(bu + v, u + v).
FiniteFunction heyde_p(const FiniteAbelianGroup& y, const FiniteFunction& q,
                       const GroupHom& b);
/// Residual of mu_1((I+b)u + 2v) mu_2(2bu + (I+b)v) =
///   mu_1((I+b)u) mu_2(2bu) mu_1(2v) mu_2((I+b)v) e^{p(u,v)}.
double heyde_doubled_residual(const HeydeInstance& inst, const FiniteFunction& p);

struct HeydeVerdict {
  double symmetry_residual = 0.0;
  double witness_residual = 0.0;
  double doubled_residual = 0.0;
  EliminationTrace trace;
  ConstancyVerdict p_constancy;
  std::vector<DegeneracyCheck> factors;
  bool gaussian = false;
};

/// Runs the sufficiency argument. Throws ConditionViolated when
/// Ker(I + alpha) != {0} and HypothesisViolated when the group has elements
/// of order 2, a characteristic function vanishes or the symmetry fails.
HeydeVerdict heyde_conclude(const HeydeInstance& inst, const Tolerances& tol = {});

struct HeydeCounterexample {
  double symmetry_residual = 0.0;
  Index kernel_element = 0;
  bool minus_identity = false;
  std::vector<DegeneracyCheck> factors;
  /// Symmetry holds within tol.algebraic and some xi_j is not degenerate.
  bool certified = false;
};

HeydeCounterexample heyde_counterexample(const HeydeInstance& inst,
                                         const Tolerances& tol = {});

/// 2/3 at 0 and 1/3 at the element of index 1; its transform never
/// vanishes on groups of odd order.
Distribution nondegenerate_law(const FiniteAbelianGroup& g);

// ---------------------------------------------------------------------------
// Kac-Bernstein

struct KBInstance {
  FiniteAbelianGroup group;
  CharacteristicFunction mu1;
  CharacteristicFunction mu2;
  std::optional<FiniteFunction> q;  // on Y x Y; default 0
};

/// max |mu_1(u+v) mu_2(u-v) - mu_1(u) mu_2(u) mu_1(v) mu_2(-v) e^{q(u,v)}|.
double kb_equation_residual(const KBInstance& inst);

struct KBDoubling {
  double first = 0.0;    // mu_1(2y) = mu_1(y)^2 |mu_2(y)|^2 e^{q(y,y)}
  double second = 0.0;   // mu_2(2y) = |mu_1(y)|^2 mu_2(y)^2 e^{q(y,-y)}
  /// |mu_j(2^n y)| = |mu_1(y) mu_2(y)|^(2^(2n-1)) over the 2-primary part.
  double iterated = 0.0;
};
KBDoubling kb_doubling_check(const KBInstance& inst);

struct KBFactorization {
  Subgroup n;  // {y : mu_1(y) mu_2(y) != 0}, in the dual
  Subgroup w;  // A(X, N)
  bool corwin = false;
  Index x1 = 0;
  Index x2 = 0;
  double reconstruction_residual = 0.0;
  /// Some x with mu_1 = mu_2 * E_x; reported, not required.
  std::optional<Index> shift_relation;
  double shift_relation_residual = 0.0;
};

/// mu_j = E_{x_j} * m_W. Throws HypothesisViolated when the equation fails
/// and TheoremViolated when N is not a subgroup or a factor does not split.
KBFactorization kb_factorize(const KBInstance& inst, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Cramer

struct CramerVerdict {
  double identity_residual = 0.0;
  DegeneracyCheck gamma;
  std::vector<DegeneracyCheck> factors;
  bool gaussian = false;
};

/// gamma^(y) = mu_1^(y) mu_2^(y) e^{q(y, y)} with gamma degenerate; q lives on
/// Y x Y. Concludes that both factors are degenerate.
CramerVerdict cramer_check(const CharacteristicFunction& gamma,
                           const CharacteristicFunction& mu1,
                           const CharacteristicFunction& mu2,
                           const std::optional<FiniteFunction>& q = std::nullopt,
                           const Tolerances& tol = {});

struct CramerVerdictT {
  double identity_residual = 0.0;  // in the log domain on the window
  GaussianFitT gamma;
  std::vector<GaussianFitT> factors;
  bool gaussian = false;
};

/// Circle form on the window |n| <= radius. Each input must be a
/// distribution; a failing one is named in the HypothesisViolated message.
CramerVerdictT cramer_check(const CircleSpectrum& gamma, const CircleSpectrum& mu1,
                            const CircleSpectrum& mu2, const Polynomial& q,
                            std::int64_t radius = 8, const Tolerances& tol = {});

// ---------------------------------------------------------------------------

namespace oracle {

/// Every distribution whose masses are k / d for one d <= max_denominator,
/// without repetitions, in a fixed order.
std::vector<Distribution> rational_grid(const FiniteAbelianGroup& g, int max_denominator);

}  // namespace oracle

}  // namespace qlab
