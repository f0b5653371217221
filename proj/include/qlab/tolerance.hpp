#pragma once

namespace qlab {

/// Numerical thresholds shared by all modules.
struct Tolerances {
  /// Algebraic identities on finite groups (transforms, pairings, Haar).
  double algebraic = 1e-12;
  /// Derived predicates: support, idempotency, identity residuals.
  double derived = 1e-9;
  /// Polynomial tests on integer windows.
  double window_poly = 1e-8;
  /// Polynomial tests on finite groups.
  double finite_poly = 1e-10;
  /// Lowest admissible value of a sampled density.
  double density_floor = -1e-9;
  /// Below this modulus a spectral value is treated as zero.
  double modulus_floor = 1e-12;

  static Tolerances standard() { return {}; }
  static Tolerances strict() {
    Tolerances t;
    t.algebraic = 1e-13;
    t.derived = 1e-11;
    t.window_poly = 1e-9;
    t.finite_poly = 1e-11;
    return t;
  }
};

}  // namespace qlab
