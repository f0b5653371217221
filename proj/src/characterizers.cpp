#include "qlab/characterizers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace qlab {

namespace {

double min_modulus(const CharacteristicFunction& f) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& z : f.values) m = std::min(m, std::abs(z));
  return m;
}

void require_cf(const CharacteristicFunction& f, const FiniteAbelianGroup& g,
                const std::string& name) {
  if (!(f.group == g) || f.values.size() != g.size()) {
    throw GroupMismatch(name + " does not live on the dual of " + g.to_string());
  }
}

void require_nonvanishing(const CharacteristicFunction& f, const std::string& name,
                          const Tolerances& tol) {
  const double m = min_modulus(f);
  if (m <= tol.modulus_floor) {
    throw HypothesisViolated("the characteristic function of " + name +
                             " vanishes (min modulus " + std::to_string(m) + ")");
  }
}

void require_automorphism(const GroupHom& a, const FiniteAbelianGroup& g,
                          const std::string& name) {
  if (!(a.source() == g) || !a.is_automorphism()) {
    throw InvalidArgument(name + " is not an automorphism of " + g.to_string());
  }
}

// q on Y x Y, or 0.
Complex q_at(const std::optional<FiniteFunction>& q, const FiniteAbelianGroup& y, Index u,
             Index v) {
  return q ? (*q)[u * y.size() + v] : Complex{0.0, 0.0};
}

void require_q(const std::optional<FiniteFunction>& q, const FiniteAbelianGroup& y) {
  if (q && !(q->group == y.product(y))) {
    throw GroupMismatch("q must live on Y x Y = " + y.product(y).to_string());
  }
}

// On a finite group a polynomial is constant; with q(0, 0) = 0 it is 0.
void require_polynomial_q(const std::optional<FiniteFunction>& q, const Tolerances& tol) {
  if (!q) return;
  for (const auto& z : q->values) {
    if (std::abs(z) > tol.derived) {
      throw HypothesisViolated(
          "q is not a polynomial vanishing at the origin (on a finite group it must be 0)");
    }
  }
}

FiniteFunction on_pairs(const FiniteAbelianGroup& y,
                        const std::function<Complex(Index, Index)>& fn) {
  const auto y2 = y.product(y);
  std::vector<Complex> v(y2.size());
  for (Index a = 0; a < y.size(); ++a) {
    for (Index b = 0; b < y.size(); ++b) v[a * y.size() + b] = fn(a, b);
  }
  return {y2, std::move(v)};
}

int declared_degree(const FiniteFunction& r, const Tolerances& tol) {
  const auto cert = min_degree(r, 4, tol.finite_poly);
  if (!cert) throw HypothesisViolated("the remainder R is not a polynomial");
  return cert->degree;
}

void require_certified(const EliminationTrace& tr) {
  if (!tr.premise_ok) {
    throw NumericalInconsistency("elimination premise fails: equation residual " +
                                 std::to_string(tr.premise_residual) + ", R residual " +
                                 std::to_string(tr.r_repeated_residual));
  }
  if (!tr.certified) {
    throw TheoremViolated("elimination left Delta_h^" + std::to_string(tr.order) +
                          " P = " + std::to_string(tr.final_residual));
  }
}

}  // namespace

DegeneracyCheck degeneracy(const CharacteristicFunction& f, const Tolerances& tol) {
  DegeneracyCheck out;
  for (const auto& z : f.values) out.defect = std::max(out.defect, std::abs(1.0 - std::abs(z)));
  out.degenerate = out.defect <= tol.derived;
  if (!out.degenerate) return out;
  const auto probs = inverse_transform(f);
  const Index x = static_cast<Index>(
      std::max_element(probs.begin(), probs.end()) - probs.begin());
  for (Index y = 0; y < f.size(); ++y) {
    if (std::abs(f[y] - f.group.pairing(x, y)) > tol.derived) return out;
  }
  out.location = x;
  return out;
}

// ---------------------------------------------------------------------------
// Skitovich-Darmois

namespace {

struct SDAdjoints {
  std::vector<GroupHom> a;
  std::vector<GroupHom> b;
};

SDAdjoints sd_validate(const SDInstance& inst) {
  const auto& g = inst.group;
  const std::size_t n = inst.mu.size();
  if (n == 0 || inst.alpha.size() != n || inst.beta.size() != n) {
    throw InvalidArgument("need one alpha_j and one beta_j per variable");
  }
  SDAdjoints out;
  for (std::size_t j = 0; j < n; ++j) {
    const auto tag = std::to_string(j + 1);
    require_cf(inst.mu[j], g, "mu_" + tag);
    require_automorphism(inst.alpha[j], g, "alpha_" + tag);
    require_automorphism(inst.beta[j], g, "beta_" + tag);
    out.a.push_back(adjoint(inst.alpha[j]));
    out.b.push_back(adjoint(inst.beta[j]));
  }
  require_q(inst.q, g);
  return out;
}

}  // namespace

double sd_equation_residual(const SDInstance& inst) {
  const auto adj = sd_validate(inst);
  const auto& y = inst.group;
  double r = 0.0;
  for (Index u = 0; u < y.size(); ++u) {
    for (Index v = 0; v < y.size(); ++v) {
      Complex joint = 1.0, first = 1.0, second = 1.0;
      for (std::size_t j = 0; j < inst.mu.size(); ++j) {
        joint *= inst.mu[j][y.add(adj.a[j](u), adj.b[j](v))];
        first *= inst.mu[j][adj.a[j](u)];
        second *= inst.mu[j][adj.b[j](v)];
      }
      r = std::max(r, std::abs(joint - first * second * std::exp(q_at(inst.q, y, u, v))));
    }
  }
  return r;
}

SDVerdict sd_conclude(const SDInstance& inst, const Tolerances& tol) {
  const auto adj = sd_validate(inst);
  const auto& y = inst.group;
  for (std::size_t j = 0; j < inst.mu.size(); ++j) {
    require_nonvanishing(inst.mu[j], "xi_" + std::to_string(j + 1), tol);
  }
  SDVerdict out;
  out.equation_residual = sd_equation_residual(inst);
  if (out.equation_residual > tol.derived) {
    throw HypothesisViolated("the characteristic functions do not satisfy the equation: "
                             "residual " + std::to_string(out.equation_residual));
  }
  require_polynomial_q(inst.q, tol);

  // nu_j(y) = mu_j(a_j y) turns the equation into prod nu_j(u + b_j v) with
  // b_j = a_j^{-1} b'_j; equal b_j are merged.
  for (std::size_t j = 0; j < inst.mu.size(); ++j) {
    const auto bj = adj.a[j].inverse().compose(adj.b[j]);
    const auto it = std::find(out.b.begin(), out.b.end(), bj);
    if (it == out.b.end()) {
      out.b.push_back(bj);
      out.classes.push_back({j});
    } else {
      out.classes[static_cast<std::size_t>(it - out.b.begin())].push_back(j);
    }
  }
  std::vector<FiniteFunction> psi;
  for (const auto& cls : out.classes) {
    psi.push_back(FiniteFunction::sample(y, [&](Index v) {
      double s = 0.0;
      for (std::size_t j : cls) s += 2.0 * std::log(std::abs(inst.mu[j][adj.a[j](v)]));
      return Complex{s, 0.0};
    }));
  }
  const std::size_t n = psi.size();
  const auto p = FiniteFunction::sample(y, [&](Index u) {
    Complex s = 0.0;
    for (std::size_t c = 0; c < n; ++c) s += psi[c][u];
    return s;
  });
  const auto q = FiniteFunction::sample(y, [&](Index v) {
    Complex s = 0.0;
    for (std::size_t c = 0; c < n; ++c) s += psi[c][out.b[c](v)];
    return s;
  });
  const auto r = on_pairs(y, [&](Index u, Index v) {
    Complex s = 0.0;
    for (std::size_t c = 0; c < n; ++c) s += psi[c][y.add(u, out.b[c](v))];
    return s - p[u] - q[v];
  });

  FiniteShiftProblem problem{y, psi, out.b, p, q, r, declared_degree(r, tol)};
  EliminationOptions opt;
  opt.strict_premise = false;
  opt.tol = tol;
  out.trace = run_lemma3(problem, opt);
  require_certified(out.trace);
  out.p_constancy = lemma5_constancy(p, tol.finite_poly);
  if (!out.p_constancy.constant) {
    throw TheoremViolated("P is a polynomial but not constant");
  }
  out.gaussian = true;
  for (const auto& mu : inst.mu) {
    out.factors.push_back(degeneracy(mu, tol));
    out.gaussian = out.gaussian && out.factors.back().degenerate;
  }
  if (!out.gaussian) throw TheoremViolated("P is constant but some xi_j is not degenerate");
  return out;
}

// ---------------------------------------------------------------------------
// Heyde

std::optional<Index> heyde_kernel_element(const GroupHom& alpha) {
  if (!alpha.is_endomorphism()) throw InvalidArgument("alpha must be an endomorphism");
  const auto k = (GroupHom::identity(alpha.source()) + alpha).kernel();
  for (Index x : k.elements()) {
    if (x != 0) return x;
  }
  return std::nullopt;
}

bool heyde_condition(const GroupHom& alpha) { return !heyde_kernel_element(alpha); }

namespace {

struct HeydeData {
  CharacteristicFunction m1;
  CharacteristicFunction m2;
  GroupHom b;
};

HeydeData heyde_data(const HeydeInstance& inst) {
  const auto& g = inst.group;
  if (!(inst.xi1.group() == g) || !(inst.xi2.group() == g)) {
    throw GroupMismatch("xi_1 and xi_2 must live on " + g.to_string());
  }
  require_automorphism(inst.alpha, g, "alpha");
  require_q(inst.q, g);
  return {char_fn(inst.xi1), char_fn(inst.xi2), adjoint(inst.alpha)};
}

}  // namespace

double heyde_symmetry_residual(const HeydeInstance& inst) {
  const auto d = heyde_data(inst);
  const auto& y = inst.group;
  double r = 0.0;
  for (Index u = 0; u < y.size(); ++u) {
    for (Index v = 0; v < y.size(); ++v) {
      const Complex plus = d.m1[y.add(u, v)] * d.m2[y.add(u, d.b(v))];
      const Complex minus = d.m1[y.sub(u, v)] * d.m2[y.sub(u, d.b(v))];
      r = std::max(r, std::abs(plus - minus));
    }
  }
  return r;
}

std::optional<FiniteFunction> heyde_symmetry_witness(const HeydeInstance& inst,
                                                     const Tolerances& tol) {
  const auto d = heyde_data(inst);
  const auto& y = inst.group;
  if (min_modulus(d.m1) <= tol.modulus_floor || min_modulus(d.m2) <= tol.modulus_floor) {
    throw UndefinedLog("a characteristic function vanishes; only the symmetry residual "
                       "is available");
  }
  auto q = on_pairs(y, [&](Index u, Index v) {
    const Complex plus = d.m1[y.add(u, v)] * d.m2[y.add(u, d.b(v))];
    const Complex minus = d.m1[y.sub(u, v)] * d.m2[y.sub(u, d.b(v))];
    return std::log(plus / minus);
  });
  // Polynomials on a finite group are constant, and q(0, 0) = 0.
  for (const auto& z : q.values) {
    if (std::abs(z) > tol.derived) return std::nullopt;
  }
  return q;
}

double heyde_witness_residual(const HeydeInstance& inst, const FiniteFunction& q) {
  const auto d = heyde_data(inst);
  const auto& y = inst.group;
  const std::optional<FiniteFunction> qq = q;
  require_q(qq, y);
  double r = 0.0;
  for (Index u = 0; u < y.size(); ++u) {
    for (Index v = 0; v < y.size(); ++v) {
      const Complex plus = d.m1[y.add(u, v)] * d.m2[y.add(u, d.b(v))];
      const Complex minus = d.m1[y.sub(u, v)] * d.m2[y.sub(u, d.b(v))];
      r = std::max(r, std::abs(plus - minus * std::exp(q[u * y.size() + v])));
    }
  }
  return r;
}

FiniteFunction heyde_p(const FiniteAbelianGroup& y, const FiniteFunction& q,
                       const GroupHom& b) {
  const auto at = [&](Index u, Index v) { return q[u * y.size() + v]; };
  return on_pairs(y, [&](Index u, Index v) {
    return at(b(u), y.neg(u)) + at(v, y.neg(v)) + at(y.add(b(u), v), y.add(u, v));
  });
}

double heyde_doubled_residual(const HeydeInstance& inst, const FiniteFunction& p) {
  const auto d = heyde_data(inst);
  const auto& y = inst.group;
  const auto ib = GroupHom::identity(y) + d.b;
  double r = 0.0;
  for (Index u = 0; u < y.size(); ++u) {
    for (Index v = 0; v < y.size(); ++v) {
      const Complex lhs = d.m1[y.add(ib(u), y.scale(v, 2))] *
                          d.m2[y.add(y.scale(d.b(u), 2), ib(v))];
      const Complex rhs = d.m1[ib(u)] * d.m2[y.scale(d.b(u), 2)] * d.m1[y.scale(v, 2)] *
                          d.m2[ib(v)] * std::exp(p[u * y.size() + v]);
      r = std::max(r, std::abs(lhs - rhs));
    }
  }
  return r;
}

HeydeVerdict heyde_conclude(const HeydeInstance& inst, const Tolerances& tol) {
  const auto d = heyde_data(inst);
  const auto& y = inst.group;
  if (structural_predicates(y).has_order_two_elements) {
    throw HypothesisViolated(y.to_string() + " has elements of order 2");
  }
  if (const auto k = heyde_kernel_element(inst.alpha)) {
    const bool minus = inst.alpha == -GroupHom::identity(y);
    std::string msg = "Ker(I + alpha) contains " + y.element_string(*k);
    if (minus) msg += "; alpha = -I, so every i.i.d. nondegenerate pair is a counterexample";
    throw ConditionViolated(*k, minus, msg);
  }
  require_nonvanishing(d.m1, "xi_1", tol);
  require_nonvanishing(d.m2, "xi_2", tol);

  HeydeVerdict out;
  out.symmetry_residual = heyde_symmetry_residual(inst);
  std::optional<FiniteFunction> q = inst.q;
  if (!q) q = heyde_symmetry_witness(inst, tol);
  if (!q) {
    throw HypothesisViolated("the conditional distribution is not symmetric: residual " +
                             std::to_string(out.symmetry_residual));
  }
  out.witness_residual = heyde_witness_residual(inst, *q);
  if (out.witness_residual > tol.derived) {
    throw HypothesisViolated("the witness does not satisfy the symmetry relation: residual " +
                             std::to_string(out.witness_residual));
  }
  const auto p = heyde_p(y, *q, d.b);
  out.doubled_residual = heyde_doubled_residual(inst, p);
  if (out.doubled_residual > tol.derived) {
    throw NumericalInconsistency("the doubled identity fails: residual " +
                                 std::to_string(out.doubled_residual));
  }

  const auto psi = [&](const CharacteristicFunction& m) {
    return FiniteFunction::sample(
        y, [&](Index v) { return Complex{2.0 * std::log(std::abs(m[v])), 0.0}; });
  };
  const auto r = on_pairs(y, [&](Index u, Index v) {
    return Complex{2.0 * p[u * y.size() + v].real(), 0.0};
  });
  FiniteHeydeProblem problem{y, psi(d.m1), psi(d.m2), d.b, r, declared_degree(r, tol),
                             std::nullopt, std::nullopt};
  EliminationOptions opt;
  opt.strict_premise = false;
  opt.tol = tol;
  out.trace = run_heyde_chain(problem, opt);
  require_certified(out.trace);
  const auto pq = heyde_pq(y, problem.psi1, problem.psi2, d.b);
  out.p_constancy = lemma5_constancy(pq.first, tol.finite_poly);
  if (!out.p_constancy.constant) throw TheoremViolated("P is a polynomial but not constant");
  out.factors = {degeneracy(d.m1, tol), degeneracy(d.m2, tol)};
  out.gaussian = out.factors[0].degenerate && out.factors[1].degenerate;
  if (!out.gaussian) throw TheoremViolated("P is constant but some xi_j is not degenerate");
  return out;
}

HeydeCounterexample heyde_counterexample(const HeydeInstance& inst, const Tolerances& tol) {
  const auto d = heyde_data(inst);
  HeydeCounterexample out;
  out.symmetry_residual = heyde_symmetry_residual(inst);
  out.factors = {degeneracy(d.m1, tol), degeneracy(d.m2, tol)};
  const auto k = heyde_kernel_element(inst.alpha);
  if (k) {
    out.kernel_element = *k;
    out.minus_identity = inst.alpha == -GroupHom::identity(inst.group);
  }
  out.certified = k.has_value() && out.symmetry_residual <= tol.algebraic &&
                  (!out.factors[0].degenerate || !out.factors[1].degenerate);
  return out;
}

Distribution nondegenerate_law(const FiniteAbelianGroup& g) {
  if (g.size() < 2) throw InvalidArgument("the trivial group carries only one law");
  std::vector<double> p(g.size(), 0.0);
  p[0] = 2.0 / 3.0;
  p[1] = 1.0 / 3.0;
  return Distribution(g, std::move(p));
}

// ---------------------------------------------------------------------------
// Kac-Bernstein

namespace {

void kb_validate(const KBInstance& inst) {
  require_cf(inst.mu1, inst.group, "mu_1");
  require_cf(inst.mu2, inst.group, "mu_2");
  require_q(inst.q, inst.group);
}

}  // namespace

double kb_equation_residual(const KBInstance& inst) {
  kb_validate(inst);
  const auto& y = inst.group;
  const auto& m1 = inst.mu1;
  const auto& m2 = inst.mu2;
  double r = 0.0;
  for (Index u = 0; u < y.size(); ++u) {
    for (Index v = 0; v < y.size(); ++v) {
      const Complex lhs = m1[y.add(u, v)] * m2[y.sub(u, v)];
      const Complex rhs =
          m1[u] * m2[u] * m1[v] * m2[y.neg(v)] * std::exp(q_at(inst.q, y, u, v));
      r = std::max(r, std::abs(lhs - rhs));
    }
  }
  return r;
}

KBDoubling kb_doubling_check(const KBInstance& inst) {
  kb_validate(inst);
  const auto& y = inst.group;
  const auto& m1 = inst.mu1;
  const auto& m2 = inst.mu2;
  KBDoubling out;
  for (Index v = 0; v < y.size(); ++v) {
    const Index two = y.scale(v, 2);
    out.first = std::max(out.first, std::abs(m1[two] - m1[v] * m1[v] * std::norm(m2[v]) *
                                                            std::exp(q_at(inst.q, y, v, v))));
    out.second = std::max(
        out.second, std::abs(m2[two] - std::norm(m1[v]) * m2[v] * m2[v] *
                                           std::exp(q_at(inst.q, y, v, y.neg(v)))));
  }
  const auto two_part = primary_component(y, 2);
  for (Index v : two_part.elements()) {
    const double base = std::abs(m1[v] * m2[v]);
    Index w = v;
    for (int n = 1; w != 0; ++n) {
      w = y.scale(w, 2);
      const double expected = std::pow(base, std::ldexp(1.0, 2 * n - 1));
      out.iterated = std::max({out.iterated, std::abs(std::abs(m1[w]) - expected),
                               std::abs(std::abs(m2[w]) - expected)});
    }
  }
  return out;
}

KBFactorization kb_factorize(const KBInstance& inst, const Tolerances& tol) {
  kb_validate(inst);
  const auto& y = inst.group;
  const double residual = kb_equation_residual(inst);
  if (residual > tol.derived) {
    throw HypothesisViolated("the sum and difference are not Q-independent with this q: "
                             "residual " + std::to_string(residual));
  }
  require_polynomial_q(inst.q, tol);
  std::vector<Index> n1, n2, n;
  for (Index v = 0; v < y.size(); ++v) {
    const bool a = std::abs(inst.mu1[v]) > tol.modulus_floor;
    const bool b = std::abs(inst.mu2[v]) > tol.modulus_floor;
    if (a) n1.push_back(v);
    if (b) n2.push_back(v);
    if (a && b) n.push_back(v);
  }
  if (structural_predicates(y).unique_division_by_2 && n1 != n2) {
    throw TheoremViolated("N_1 != N_2 on a group with unique division by 2");
  }
  std::optional<Subgroup> nsub;
  try {
    nsub.emplace(y, n);
  } catch (const InvalidSubgroup&) {
    throw TheoremViolated("the nonvanishing set N is not a subgroup");
  }
  KBFactorization out{*nsub, annihilator(*nsub), false, 0, 0, 0.0, std::nullopt, 0.0};
  out.corwin = is_corwin(out.w);
  if (!out.corwin) throw TheoremViolated("W = A(X, N) is not a Corwin subgroup");

  const auto mu1 = inverse_char_fn(inst.mu1);
  const auto mu2 = inverse_char_fn(inst.mu2);
  const auto split = [&](const Distribution& mu, const char* name) {
    const auto f = idempotent_shift_factor(mu);
    if (!f || !(f->k == out.w)) {
      throw TheoremViolated(std::string(name) + " does not split as E_x * m_W");
    }
    const auto rebuilt = convolve(Distribution::degenerate(y, f->x), haar(out.w));
    out.reconstruction_residual =
        std::max(out.reconstruction_residual, max_abs_diff(rebuilt, mu));
    return f->x;
  };
  out.x1 = split(mu1, "mu_1");
  out.x2 = split(mu2, "mu_2");
  if (out.reconstruction_residual > tol.algebraic) {
    throw TheoremViolated("reconstructed factors miss mu_j by " +
                          std::to_string(out.reconstruction_residual));
  }
  out.shift_relation_residual = std::numeric_limits<double>::infinity();
  for (Index x = 0; x < y.size(); ++x) {
    double d = 0.0;
    for (Index z = 0; z < y.size(); ++z) {
      d = std::max(d, std::abs(mu1[y.add(z, x)] - mu2[z]));
    }
    if (d < out.shift_relation_residual) {
      out.shift_relation_residual = d;
      if (d <= tol.algebraic) out.shift_relation = x;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cramer

CramerVerdict cramer_check(const CharacteristicFunction& gamma,
                           const CharacteristicFunction& mu1,
                           const CharacteristicFunction& mu2,
                           const std::optional<FiniteFunction>& q, const Tolerances& tol) {
  const auto& y = gamma.group;
  require_cf(mu1, y, "mu_1");
  require_cf(mu2, y, "mu_2");
  require_q(q, y);
  CramerVerdict out;
  for (Index v = 0; v < y.size(); ++v) {
    out.identity_residual =
        std::max(out.identity_residual,
                 std::abs(gamma[v] - mu1[v] * mu2[v] * std::exp(q_at(q, y, v, v))));
  }
  if (out.identity_residual > tol.derived) {
    throw HypothesisViolated("gamma is not mu_1 * mu_2 e^q: residual " +
                             std::to_string(out.identity_residual));
  }
  require_polynomial_q(q, tol);
  out.gamma = degeneracy(gamma, tol);
  if (!out.gamma.degenerate) {
    throw HypothesisViolated("gamma is not Gaussian (on a finite group: not degenerate)");
  }
  out.factors = {degeneracy(mu1, tol), degeneracy(mu2, tol)};
  out.gaussian = out.factors[0].degenerate && out.factors[1].degenerate;
  if (!out.gaussian) throw TheoremViolated("a factor of a degenerate law is not degenerate");
  return out;
}

CramerVerdictT cramer_check(const CircleSpectrum& gamma, const CircleSpectrum& mu1,
                            const CircleSpectrum& mu2, const Polynomial& q,
                            std::int64_t radius, const Tolerances& tol) {
  const auto validate = [](const CircleSpectrum& s, const std::string& name) {
    if (s.haar || s.phi.coeffs.empty()) return;  // Haar or a point mass
    try {
      (void)CircleDistribution::from_spectrum(s, name);
    } catch (const Error& e) {
      throw HypothesisViolated(name + " is not a distribution on T: " + e.what());
    }
  };
  validate(gamma, "gamma");
  validate(mu1, "mu_1");
  validate(mu2, "mu_2");
  if (q.dim() != 2 && !q.is_zero()) throw InvalidArgument("q must be a polynomial on Z^2");

  CramerVerdictT out;
  const auto lg = gamma.log_window(radius);
  const auto l1 = mu1.log_window(radius);
  const auto l2 = mu2.log_window(radius);
  for (std::int64_t n = -radius; n <= radius; ++n) {
    const Point p{n};
    const Point pp{n, n};
    const Complex gap = lg.log_at(p) - l1.log_at(p) - l2.log_at(p) -
                        (q.is_zero() ? 0.0 : q.at(pp));
    const double re = std::isnan(gap.real()) ? 0.0 : std::abs(gap.real());
    const double im = std::abs(std::remainder(gap.imag(), 2.0 * std::numbers::pi));
    out.identity_residual = std::max({out.identity_residual, re, im});
  }
  if (out.identity_residual > tol.window_poly) {
    throw HypothesisViolated("gamma is not mu_1 * mu_2 e^{q(n,n)}: log residual " +
                             std::to_string(out.identity_residual));
  }
  out.gamma = gaussian_check_T(lg, tol.window_poly);
  if (!out.gamma.gaussian) throw HypothesisViolated("gamma is not Gaussian");
  out.factors = {gaussian_check_T(l1, tol.window_poly), gaussian_check_T(l2, tol.window_poly)};
  out.gaussian = out.factors[0].gaussian && out.factors[1].gaussian;
  if (!out.gaussian) throw TheoremViolated("a factor of a Gaussian law is not Gaussian");
  return out;
}

// ---------------------------------------------------------------------------

namespace oracle {

std::vector<Distribution> rational_grid(const FiniteAbelianGroup& g, int max_denominator) {
  std::vector<Distribution> out;
  std::set<std::vector<double>> seen;
  const std::size_t m = g.size();
  std::vector<int> k(m, 0);
  for (int d = 1; d <= max_denominator; ++d) {
    // Compositions of d into m parts, last part absorbing the remainder.
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
      if (i + 1 == m) {
        k[i] = left;
        std::vector<double> p(m);
        for (std::size_t t = 0; t < m; ++t) p[t] = static_cast<double>(k[t]) / d;
        if (seen.insert(p).second) out.emplace_back(g, std::move(p));
        return;
      }
      for (int c = left; c >= 0; --c) {
        k[i] = c;
        rec(i + 1, left - c);
      }
    };
    rec(0, d);
  }
  return out;
}

}  // namespace oracle

}  // namespace qlab
