#include "qlab/qindep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "qlab/error.hpp"

namespace qlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kAmbiguity = 1e-9;

double wrap_angle(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

Complex safe_log(Complex z, double floor) {
  if (std::abs(z) < floor) return {kNegInf, 0.0};
  return std::log(z);
}

Complex safe_exp(Complex l) {
  if (l.real() == kNegInf) return 0.0;
  return std::exp(l);
}

std::vector<std::size_t> marginal_offsets(const WindowJoint& j) {
  std::vector<std::size_t> off;
  std::size_t acc = 0;
  for (const auto& m : j.marginals) {
    off.push_back(acc);
    acc += m.logs.box.dim();
  }
  if (acc != j.joint.logs.box.dim()) {
    throw InvalidArgument("marginal dimensions do not add up to the joint window");
  }
  return off;
}

// Sum of the marginal logarithms at a joint point; -inf if any vanishes.
Complex marginal_log_sum(const WindowJoint& j, const std::vector<std::size_t>& off,
                         const Point& p) {
  Complex acc = 0.0;
  for (std::size_t k = 0; k < j.marginals.size(); ++k) {
    const auto& m = j.marginals[k];
    Point slice(p.begin() + static_cast<std::ptrdiff_t>(off[k]),
                p.begin() + static_cast<std::ptrdiff_t>(off[k] + m.logs.box.dim()));
    if (!m.logs.box.contains(slice)) {
      throw WindowExhausted("marginal window does not cover the joint window");
    }
    const Complex l = m.log_at(slice);
    if (l.real() == kNegInf) return {kNegInf, 0.0};
    acc += l;
  }
  return acc;
}

std::int64_t l1(const Point& p) {
  std::int64_t s = 0;
  for (auto c : p) s += std::abs(c);
  return s;
}

double witness_log_gap(Complex observed, Complex fitted) {
  const double re = observed.real() - fitted.real();
  const double im = wrap_angle(observed.imag() - fitted.imag());
  return std::hypot(re, im);
}

// Log ratio of two log-windows on the same box, with the zero conventions of
// the identity a = b * exp{q}. Returns nullopt when the identity is
// impossible (b vanishes where a does not).
std::optional<WindowFunction> log_ratio(
    const IntegerBox& box, bool from_linear,
    const std::function<std::pair<Complex, Complex>(const Point&)>& logs_at) {
  WindowFunction r{box, std::vector<Complex>(box.size())};
  const double floor_log = std::log(1e-12);
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Point p = box.point(i);
    const auto [la, lb] = logs_at(p);
    const bool a_zero = la.real() == kNegInf || (from_linear && la.real() < floor_log);
    const bool b_zero = lb.real() == kNegInf || (from_linear && lb.real() < floor_log);
    if (b_zero && !a_zero) return std::nullopt;
    if (b_zero || a_zero) {
      throw UndefinedLog("log ratio undefined at a point where a characteristic "
                         "function vanishes");
    }
    r.values[i] = la - lb;
  }
  return r;
}

std::optional<QWitness> fit_witness(const WindowFunction& ratio, bool from_linear,
                                    int d_max, const Tolerances& tol) {
  const Point zero(ratio.box.dim(), 0);
  if (!ratio.box.contains(zero)) {
    throw WindowExhausted("window must contain the origin");
  }
  const auto unwrapped = unwrap_phase(ratio, from_linear);
  if (std::abs(unwrapped.at(zero)) > tol.derived) return std::nullopt;
  auto fit = fit_polynomial_window(unwrapped, d_max, tol.window_poly);
  if (!fit) return std::nullopt;
  QWitness w;
  w.degree = std::max(fit->real.degree(), fit->imag.degree());
  w.real = fit->real;
  w.imag = fit->imag;
  w.log_residual = fit->max_error;
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// LogWindow

LogWindow LogWindow::from_values(const WindowFunction& f) {
  WindowFunction logs{f.box, std::vector<Complex>(f.values.size())};
  for (std::size_t i = 0; i < f.values.size(); ++i) logs.values[i] = safe_log(f.values[i], 1e-300);
  return {std::move(logs), true};
}

WindowFunction LogWindow::values() const {
  WindowFunction out{logs.box, std::vector<Complex>(logs.values.size())};
  for (std::size_t i = 0; i < logs.values.size(); ++i) out.values[i] = safe_exp(logs.values[i]);
  return out;
}

WindowFunction unwrap_phase(const WindowFunction& logs, bool from_linear) {
  const auto& box = logs.box;
  const Point zero(box.dim(), 0);
  if (!box.contains(zero)) throw UndefinedLog("window does not contain the origin");
  const double floor_log = std::log(1e-12);
  std::vector<std::size_t> order(box.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::int64_t> dist(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) dist[i] = l1(box.point(i));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  WindowFunction out = logs;
  for (std::size_t i : order) {
    const Point p = box.point(i);
    const Complex l = logs.values[i];
    if (l.real() == kNegInf || std::isnan(l.real()) ||
        (from_linear && l.real() < floor_log)) {
      throw UndefinedLog("modulus vanishes at a point on an unwrapping path");
    }
    const double w = wrap_angle(l.imag());
    if (dist[i] == 0) {
      out.values[i] = {l.real(), w};
      continue;
    }
    Point pred = p;
    for (std::size_t a = pred.size(); a-- > 0;) {
      if (pred[a] != 0) {
        pred[a] += pred[a] > 0 ? -1 : 1;
        break;
      }
    }
    const double base = out.values[box.index(pred)].imag();
    const double step = wrap_angle(w - base);
    if (std::abs(step) >= std::numbers::pi - kAmbiguity) {
      throw UndefinedLog("ambiguous phase step of " + std::to_string(step) +
                         " rad on an unwrapping path");
    }
    out.values[i] = {l.real(), base + step};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite groups

CharacteristicFunction joint_char_fn(const JointDistribution& j) {
  return char_fn(j.as_distribution());
}

namespace {

std::vector<Complex> marginal_product(const JointDistribution& j) {
  std::vector<CharacteristicFunction> cfs;
  for (const auto& m : j.marginals()) cfs.push_back(char_fn(m));
  std::vector<Complex> prod(j.product_group().size());
  for (Index y = 0; y < prod.size(); ++y) {
    const auto parts = j.split(y);
    Complex acc = 1.0;
    for (std::size_t k = 0; k < parts.size(); ++k) acc *= cfs[k][parts[k]];
    prod[y] = acc;
  }
  return prod;
}

}  // namespace

double verify_q_independence(const JointDistribution& j, const FiniteFunction& q) {
  if (!(q.group == j.product_group())) {
    throw GroupMismatch("witness domain " + q.group.to_string() +
                        " is not the product dual " + j.product_group().to_string());
  }
  if (std::abs(q.values[0]) > 1e-12) throw InvalidArgument("witness needs q(0) = 0");
  const auto jf = joint_char_fn(j);
  const auto prod = marginal_product(j);
  double r = 0.0;
  for (Index y = 0; y < prod.size(); ++y) {
    r = std::max(r, std::abs(jf[y] - prod[y] * std::exp(q.values[y])));
  }
  return r;
}

std::optional<QWitness> extract_q_witness(const JointDistribution& j,
                                          const Tolerances& tol) {
  const auto jf = joint_char_fn(j);
  const auto prod = marginal_product(j);
  double r = 0.0;
  bool nonvanishing = true;
  for (Index y = 0; y < prod.size(); ++y) {
    r = std::max(r, std::abs(jf[y] - prod[y]));
    if (std::abs(prod[y]) < tol.modulus_floor) nonvanishing = false;
  }
  if (r > tol.derived) return std::nullopt;
  // A witness must be a polynomial, hence constant, hence 0. When the log
  // ratio exists, confirm it is constant.
  if (nonvanishing && prod.size() <= 256) {
    const auto g = j.product_group();
    const auto ratio = FiniteFunction::sample(
        g, [&](Index y) { return std::log(jf[y] / prod[y]); });
    if (!lemma5_constancy(ratio, tol.finite_poly).consistent()) {
      throw NumericalInconsistency("log ratio of a factorizing joint is not constant");
    }
  }
  QWitness w;
  w.residual = r;
  return w;
}

std::optional<QWitness> q_identical_witness(const CharacteristicFunction& a,
                                            const CharacteristicFunction& b,
                                            const Tolerances& tol) {
  if (!(a.group == b.group)) throw GroupMismatch("q_identical_witness on different groups");
  bool nonvanishing = true;
  double diff = 0.0;
  for (Index y = 0; y < a.size(); ++y) {
    const bool za = std::abs(a[y]) < tol.modulus_floor;
    const bool zb = std::abs(b[y]) < tol.modulus_floor;
    if (za != zb) return std::nullopt;
    if (za) nonvanishing = false;
    diff = std::max(diff, std::abs(a[y] - b[y]));
  }
  if (nonvanishing && a.size() <= 256) {
    const auto ratio = FiniteFunction::sample(
        a.group, [&](Index y) { return std::log(a[y] / b[y]); });
    const auto v = lemma5_constancy(ratio, tol.finite_poly);
    if (!v.polynomial) return std::nullopt;
    if (!v.consistent()) {
      throw NumericalInconsistency("polynomial log ratio that is not constant");
    }
  }
  if (diff > tol.derived) return std::nullopt;
  QWitness w;
  w.residual = diff;
  return w;
}

// ---------------------------------------------------------------------------
// Windows

WindowResidual verify_q_independence(const WindowJoint& j, const Polynomial& q_real,
                                     const Polynomial& q_imag) {
  const auto off = marginal_offsets(j);
  const auto& box = j.joint.logs.box;
  WindowResidual out;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Point p = box.point(i);
    const Complex lj = j.joint.logs.values[i];
    const Complex lm = marginal_log_sum(j, off, p);
    const Complex q{q_real.at(p), q_imag.at(p)};
    const Complex rhs = lm.real() == kNegInf ? Complex{kNegInf, 0.0} : lm + q;
    out.residual = std::max(out.residual, std::abs(safe_exp(lj) - safe_exp(rhs)));
    if (lj.real() != kNegInf && rhs.real() != kNegInf) {
      out.log_residual = std::max(out.log_residual, witness_log_gap(lj, rhs));
    }
  }
  return out;
}

std::optional<QWitness> extract_q_witness(const WindowJoint& j, int d_max,
                                          const Tolerances& tol) {
  const auto off = marginal_offsets(j);
  bool from_linear = j.joint.from_linear;
  for (const auto& m : j.marginals) from_linear = from_linear || m.from_linear;
  const auto ratio = log_ratio(j.joint.logs.box, from_linear, [&](const Point& p) {
    return std::make_pair(j.joint.log_at(p), marginal_log_sum(j, off, p));
  });
  if (!ratio) return std::nullopt;
  auto w = fit_witness(*ratio, from_linear, d_max, tol);
  if (!w) return std::nullopt;
  const auto check = verify_q_independence(j, w->real, w->imag);
  w->residual = check.residual;
  w->log_residual = std::max(w->log_residual, check.log_residual);
  return w;
}

std::optional<QWitness> q_identical_witness(const LogWindow& a, const LogWindow& b,
                                            int d_max, const Tolerances& tol) {
  if (!(a.logs.box == b.logs.box)) throw InvalidArgument("windows differ");
  const bool from_linear = a.from_linear || b.from_linear;
  const auto ratio = log_ratio(a.logs.box, from_linear, [&](const Point& p) {
    return std::make_pair(a.log_at(p), b.log_at(p));
  });
  if (!ratio) return std::nullopt;
  auto w = fit_witness(*ratio, from_linear, d_max, tol);
  if (!w) return std::nullopt;
  for (std::size_t i = 0; i < a.logs.values.size(); ++i) {
    const Point p = a.logs.box.point(i);
    const Complex q{w->real.at(p), w->imag.at(p)};
    w->residual = std::max(w->residual, std::abs(safe_exp(a.logs.values[i]) -
                                                 safe_exp(b.logs.values[i] + q)));
  }
  return w;
}

ProductDefect product_defect(const WindowJoint& j) {
  const auto off = marginal_offsets(j);
  const auto& box = j.joint.logs.box;
  ProductDefect d;
  d.at_relative = Point(box.dim(), 0);
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Point p = box.point(i);
    const Complex lj = j.joint.logs.values[i];
    const Complex lm = marginal_log_sum(j, off, p);
    d.absolute = std::max(d.absolute, std::abs(safe_exp(lj) - safe_exp(lm)));
    if (lm.real() == kNegInf) continue;
    const double rel = std::abs(safe_exp(lj - lm) - 1.0);
    if (rel > d.relative) {
      d.relative = rel;
      d.at_relative = p;
    }
  }
  return d;
}

}  // namespace qlab
