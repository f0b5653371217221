#pragma once

// Witnesses q for the identity
//
//   J^(y_1, ..., y_n) = prod_j mu_j^(y_j) * exp{q(y_1, ..., y_n)},  q(0) = 0,
//
// on finite groups (where q collapses to 0) and on integer windows of Z^m,
// together with the one-variable form mu_1^ = mu_2^ * exp{q}.

#include <optional>
#include <vector>

#include "qlab/measures.hpp"
#include "qlab/polyfd.hpp"
#include "qlab/polynomial.hpp"
#include "qlab/tolerance.hpp"

namespace qlab {

/// Spectral values on a window stored as complex logarithms. A real part of
/// -inf encodes the value 0. Imaginary parts may lie on any branch.
struct LogWindow {
  WindowFunction logs;
  /// Built from linear values; moduli below 1e-12 count as zero and abort
  /// phase unwrapping.
  bool from_linear = false;

  static LogWindow from_values(const WindowFunction& f);
  static LogWindow from_logs(WindowFunction logs) { return {std::move(logs), false}; }
  /// exp of the stored logarithms (may underflow to 0).
  WindowFunction values() const;
  Complex log_at(std::span<const std::int64_t> y) const { return logs.at(y); }
};

/// Joint spectrum on a box of dimension sum_j dim_j and its marginals.
struct WindowJoint {
  LogWindow joint;
  std::vector<LogWindow> marginals;
};

struct QWitness {
  int degree = 0;
  /// q = real + i * imag. Zero-dimensional (the constant 0) on finite groups.
  Polynomial real;
  Polynomial imag;
  /// max |J^ - prod mu_j^ * exp{q}| in linear scale.
  double residual = 0.0;
  /// max |log J^ - sum log mu_j^ - q| (imaginary part modulo 2 pi); windows.
  double log_residual = 0.0;

  bool is_zero(double tol = 0.0) const {
    return real.pruned(tol).is_zero() && imag.pruned(tol).is_zero();
  }
};

/// Joint characteristic function J^ of a finite joint, indexed like the
/// product group.
CharacteristicFunction joint_char_fn(const JointDistribution& j);

/// max over the product dual of |J^ - prod mu_j^ * exp{q}|; `q` lives on the
/// product dual and must satisfy q(0) = 0.
double verify_q_independence(const JointDistribution& j, const FiniteFunction& q);

struct WindowResidual {
  double residual = 0.0;
  double log_residual = 0.0;
};
WindowResidual verify_q_independence(const WindowJoint& j, const Polynomial& q_real,
                                     const Polynomial& q_imag);

/// On finite groups every admissible q is constant, hence 0: succeeds iff
/// J^ equals the product of the marginal transforms within tol.derived.
std::optional<QWitness> extract_q_witness(const JointDistribution& j,
                                          const Tolerances& tol = {});

/// Log of the ratio J^ / prod mu_j^ with phase unwrapping from the origin,
/// then a polynomial fit of degree <= d_max. Throws UndefinedLog when the
/// ratio cannot be followed along a path from the origin.
std::optional<QWitness> extract_q_witness(const WindowJoint& j, int d_max = 8,
                                          const Tolerances& tol = {});

/// mu_1^ = mu_2^ * exp{q}: on finite groups q can only be 0.
std::optional<QWitness> q_identical_witness(const CharacteristicFunction& a,
                                            const CharacteristicFunction& b,
                                            const Tolerances& tol = {});
std::optional<QWitness> q_identical_witness(const LogWindow& a, const LogWindow& b,
                                            int d_max = 8,
                                            const Tolerances& tol = {});

/// Unwraps imaginary parts along axis-parallel paths from the origin: the
/// predecessor of a point moves its last nonzero coordinate one step toward
/// 0. Throws UndefinedLog on a zero value or an ambiguous step.
WindowFunction unwrap_phase(const WindowFunction& logs, bool from_linear);

struct ProductDefect {
  double absolute = 0.0;  // max |J^ - prod mu_j^|
  double relative = 0.0;  // max |J^ / prod mu_j^ - 1| over nonvanishing points
  Point at_relative;
};
ProductDefect product_defect(const WindowJoint& j);

}  // namespace qlab
