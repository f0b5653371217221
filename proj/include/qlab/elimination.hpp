#pragma once

// Finite-difference elimination for Pexider-type equations
//
//   sum_j psi_j(u + b_j v) = P(u) + Q(v) + R(u, v)               (mode "lemma3")
//   psi_1((I+b)u + 2v) + psi_2(2bu + (I+b)v) = P(u) + Q(v) + R(u, v)  (mode "heyde")
//
// on Y^2, with Y a finite abelian group or a window of Z. Each chain applies
// shift-substitute-subtract steps that remove the psi terms and Q, then
// annihilates R (of degree l) with Delta_{(h,k)}^{l+1}. What survives is a
// pure difference Delta_h^m P, which must vanish.

#include <optional>
#include <string>
#include <vector>

#include "qlab/group.hpp"
#include "qlab/polyfd.hpp"
#include "qlab/tolerance.hpp"

namespace qlab {

/// Delta_{(s,t)} F(u, v) = F(u + s, v + t) - F(u, v) on Y x Y (the product
/// group y.product(y)).
FiniteFunction substitute_and_subtract(const FiniteFunction& f,
                                       const FiniteAbelianGroup& y, Index s, Index t);
/// On a window of Z^2; the box shrinks.
WindowFunction substitute_and_subtract(const WindowFunction& f, std::int64_t s,
                                       std::int64_t t);

struct FiniteShiftProblem {
  FiniteAbelianGroup y;
  std::vector<FiniteFunction> psi;  // on Y
  std::vector<GroupHom> b;          // distinct automorphisms of Y
  FiniteFunction p;                 // on Y
  FiniteFunction q;                 // on Y
  FiniteFunction r;                 // on Y x Y
  int l = 0;                        // declared degree of R
};

struct WindowShiftProblem {
  std::int64_t radius = 0;          // the square domain is [-radius, radius]^2
  std::vector<WindowFunction> psi;  // on windows of Z covering u + b_j v
  std::vector<int> b;               // distinct, each +1 or -1
  WindowFunction p;
  WindowFunction q;
  WindowFunction r;                 // on the square domain
  int l = 0;
};

struct FiniteHeydeProblem {
  FiniteAbelianGroup y;
  FiniteFunction psi1;
  FiniteFunction psi2;
  GroupHom b;
  FiniteFunction r;  // on Y x Y
  int l = 0;
  /// Default to P(y) = psi1((I+b)y) + psi2(2by), Q(y) = psi1(2y) + psi2((I+b)y).
  std::optional<FiniteFunction> p;
  std::optional<FiniteFunction> q;
};

struct WindowHeydeProblem {
  std::int64_t radius = 0;
  WindowFunction psi1;  // must cover |y| <= 4 * radius
  WindowFunction psi2;
  int b = 1;            // only b = 1 satisfies Ker(I + b) = {0} on Z
  WindowFunction r;
  int l = 0;
  std::optional<WindowFunction> p;
  std::optional<WindowFunction> q;
};

struct ShiftStep {
  Point s;  // shift of u
  Point t;  // shift of v
  std::string realizes;
  /// Single-function mode: the arguments l_{mj} = h_m + b_j k_m by which each
  /// surviving psi_j is differenced in this step.
  std::vector<Point> psi_shifts;
};

struct SampleTrace {
  Point h;
  Point k;
  std::vector<ShiftStep> steps;
  double p_residual = 0.0;  // max |O[P]| for this sample
};

struct EliminationTrace {
  std::string mode;  // "lemma3" or "heyde"
  std::vector<SampleTrace> samples;
  std::string final_operator;
  int order = 0;  // m with O[P] = Delta_h^m P
  double premise_residual = 0.0;    // max |LHS - P - Q - R|
  double r_repeated_residual = 0.0; // max |Delta_{(h,k)}^{l+1} R|
  double r_chain_residual = 0.0;    // max |O[R]| (mixed differences of the chain)
  double lhs_residual = 0.0;        // max |O[LHS]|
  double final_residual = 0.0;      // max |Delta_h^order P|
  bool premise_ok = false;
  bool certified = false;
  int degree_bound = 0;             // max{n, l}
  std::optional<int> degree;        // min_degree(P, degree_bound) when certified
  std::int64_t required_radius = 0; // windows
};

struct EliminationOptions {
  /// Throw PremiseViolated when the equation or the annihilation premise
  /// fails; otherwise report the residuals uncertified.
  bool strict_premise = true;
  Tolerances tol;
};

EliminationTrace run_lemma3(const FiniteShiftProblem& problem,
                            const EliminationOptions& options = {});
EliminationTrace run_lemma3(const WindowShiftProblem& problem,
                            const EliminationOptions& options = {});
EliminationTrace run_heyde_chain(const FiniteHeydeProblem& problem,
                                 const EliminationOptions& options = {});
EliminationTrace run_heyde_chain(const WindowHeydeProblem& problem,
                                 const EliminationOptions& options = {});

/// Re-applies the recorded steps of every sample to P lifted to Y^2 and
/// returns the maximum, in the engine's evaluation order.
double replay_final_residual(const EliminationTrace& trace, const FiniteAbelianGroup& y,
                             const FiniteFunction& p);
double replay_final_residual(const EliminationTrace& trace, std::int64_t radius,
                             const WindowFunction& p);

/// Re-derives k_m = -b_{n-m+1}^{-1} h and l_{mj} = (b_j - b_{n-m+1}) k_m
/// from the problem and compares with the trace. Returns a description of
/// the first mismatch.
std::optional<std::string> validate_trace(const EliminationTrace& trace,
                                          const FiniteShiftProblem& problem);
std::optional<std::string> validate_trace(const EliminationTrace& trace,
                                          const WindowShiftProblem& problem);

/// P and Q of the Heyde equation built from psi_1, psi_2.
std::pair<FiniteFunction, FiniteFunction> heyde_pq(const FiniteAbelianGroup& y,
                                                   const FiniteFunction& psi1,
                                                   const FiniteFunction& psi2,
                                                   const GroupHom& b);

}  // namespace qlab
