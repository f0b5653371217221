#include "qlab/polyfd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "qlab/error.hpp"

namespace qlab {

namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kBlowup = 1e200;

double sup_norm(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& z : v) {
    const double a = std::abs(z);
    if (!std::isfinite(a)) return std::numeric_limits<double>::infinity();
    m = std::max(m, a);
  }
  return m;
}

// ratios[k-1] = |Delta_h^k f| / max(1, |Delta_h^{k-1} f|) for k = 1..kmax.
// Once an iterate vanishes exactly the remaining ratios are zero; once the
// iterates blow up the last ratio is repeated.
template <class Step>
std::vector<double> iterate_ratios(std::vector<Complex> current, int kmax,
                                   Step step) {
  std::vector<double> ratios;
  double prev = sup_norm(current);
  for (int k = 1; k <= kmax; ++k) {
    auto next = step(current, k);
    if (!next) break;
    const double norm = sup_norm(*next);
    const double r = norm / std::max(1.0, prev);
    ratios.push_back(r);
    if (norm == 0.0) {
      ratios.resize(static_cast<std::size_t>(kmax), 0.0);
      break;
    }
    if (!std::isfinite(norm) || norm > kBlowup) {
      ratios.resize(static_cast<std::size_t>(kmax), ratios.back());
      break;
    }
    prev = norm;
    current = std::move(*next);
  }
  return ratios;
}

double min_prefix(const std::vector<double>& ratios, int count) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < count && k < static_cast<int>(ratios.size()); ++k) {
    m = std::min(m, ratios[k]);
  }
  return m;
}

std::vector<std::vector<double>> finite_ratio_table(const FiniteFunction& f,
                                                    int kmax) {
  const auto& g = f.group;
  std::vector<std::vector<double>> table(g.size());
  std::vector<Index> shifted(g.size());
  for (Index h = 1; h < g.size(); ++h) {
    for (Index y = 0; y < g.size(); ++y) shifted[y] = g.add(y, h);
    table[h] = iterate_ratios(
        f.values, kmax,
        [&](const std::vector<Complex>& cur, int) -> std::optional<std::vector<Complex>> {
          std::vector<Complex> out(cur.size());
          for (Index y = 0; y < cur.size(); ++y) out[y] = cur[shifted[y]] - cur[y];
          return out;
        });
  }
  return table;
}

// All nonzero h with |h_i| <= bound_i.
std::vector<Point> shift_candidates(const std::vector<std::int64_t>& bound) {
  std::vector<Point> out;
  Point h(bound.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == bound.size()) {
      if (std::any_of(h.begin(), h.end(), [](auto c) { return c != 0; })) {
        out.push_back(h);
      }
      return;
    }
    for (std::int64_t c = -bound[i]; c <= bound[i]; ++c) {
      h[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

struct WindowRatios {
  Point h;
  std::vector<double> ratios;
};

// Shifts h are enumerated for which at least `min_steps` differences fit.
std::vector<WindowRatios> window_ratio_table(const WindowFunction& f, int kmax,
                                             int min_steps) {
  std::vector<std::int64_t> bound(f.box.dim());
  for (std::size_t i = 0; i < f.box.dim(); ++i) {
    bound[i] = (f.box.hi[i] - f.box.lo[i]) / std::max(1, min_steps);
  }
  std::vector<WindowRatios> out;
  for (auto& h : shift_candidates(bound)) {
    IntegerBox box = f.box;
    auto ratios = iterate_ratios(
        f.values, kmax,
        [&](const std::vector<Complex>& cur, int) -> std::optional<std::vector<Complex>> {
          WindowFunction w{box, cur};
          const IntegerBox next = box.shrink(h);
          if (next.empty()) return std::nullopt;
          auto d = delta(w, h);
          box = next;
          return std::move(d.values);
        });
    out.push_back({h, std::move(ratios)});
  }
  return out;
}

bool fits_in(const IntegerBox& box, const Point& h, int steps) {
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (steps * std::abs(h[i]) > box.hi[i] - box.lo[i]) return false;
  }
  return true;
}

PolyTest window_test_from(const WindowFunction& f,
                          const std::vector<WindowRatios>& table, int n,
                          double tol) {
  if (f.box.radius() < n + 2) {
    throw WindowExhausted("window radius " + std::to_string(f.box.radius()) +
                          " is too small for degree " + std::to_string(n));
  }
  double worst = 0.0;
  for (const auto& row : table) {
    if (!fits_in(f.box, row.h, n + 1)) continue;
    worst = std::max(worst, min_prefix(row.ratios, n + 1));
  }
  return {worst < tol, worst};
}

}  // namespace

// ---------------------------------------------------------------------------
// IntegerBox

IntegerBox IntegerBox::centered(std::int64_t radius, std::size_t dim) {
  if (radius < 0) throw InvalidArgument("window radius must be >= 0");
  return {Point(dim, -radius), Point(dim, radius)};
}

bool IntegerBox::empty() const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (lo[i] > hi[i]) return true;
  }
  return false;
}

std::size_t IntegerBox::size() const {
  if (empty()) return 0;
  std::size_t s = 1;
  for (std::size_t i = 0; i < dim(); ++i) s *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
  return s;
}

bool IntegerBox::contains(std::span<const std::int64_t> y) const {
  if (y.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (y[i] < lo[i] || y[i] > hi[i]) return false;
  }
  return true;
}

std::size_t IntegerBox::index(std::span<const std::int64_t> y) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    idx = idx * static_cast<std::size_t>(hi[i] - lo[i] + 1) +
          static_cast<std::size_t>(y[i] - lo[i]);
  }
  return idx;
}

Point IntegerBox::point(std::size_t idx) const {
  Point y(dim());
  for (std::size_t i = dim(); i-- > 0;) {
    const auto w = static_cast<std::size_t>(hi[i] - lo[i] + 1);
    y[i] = lo[i] + static_cast<std::int64_t>(idx % w);
    idx /= w;
  }
  return y;
}

std::int64_t IntegerBox::radius() const {
  std::int64_t r = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < dim(); ++i) {
    r = std::min({r, -lo[i], hi[i]});
  }
  if (dim() == 0) return 0;
  return r < 0 ? -1 : r;
}

IntegerBox IntegerBox::shrink(std::span<const std::int64_t> h) const {
  if (h.size() != dim()) throw InvalidArgument("shift has the wrong dimension");
  IntegerBox out = *this;
  for (std::size_t i = 0; i < dim(); ++i) {
    out.lo[i] = lo[i] - std::min<std::int64_t>(h[i], 0);
    out.hi[i] = hi[i] - std::max<std::int64_t>(h[i], 0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Functions

FiniteFunction FiniteFunction::sample(const FiniteAbelianGroup& g,
                                      const std::function<Complex(Index)>& fn) {
  std::vector<Complex> v(g.size());
  for (Index y = 0; y < g.size(); ++y) v[y] = fn(y);
  return {g, std::move(v)};
}

WindowFunction WindowFunction::sample(
    std::int64_t radius, std::size_t dim,
    const std::function<Complex(std::span<const std::int64_t>)>& fn) {
  return sample(IntegerBox::centered(radius, dim), fn);
}

WindowFunction WindowFunction::sample(
    const IntegerBox& box,
    const std::function<Complex(std::span<const std::int64_t>)>& fn) {
  std::vector<Complex> v(box.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(box.point(i));
  return {box, std::move(v)};
}

Complex WindowFunction::at(std::span<const std::int64_t> y) const {
  if (!box.contains(y)) throw WindowExhausted("point outside the window");
  return values[box.index(y)];
}

double WindowFunction::max_abs() const { return sup_norm(values); }

FiniteFunction delta(const FiniteFunction& f, Index h) {
  const auto& g = f.group;
  if (h >= g.size()) throw InvalidElement("shift outside the group");
  std::vector<Complex> out(g.size());
  for (Index y = 0; y < g.size(); ++y) out[y] = f.values[g.add(y, h)] - f.values[y];
  return {g, std::move(out)};
}

WindowFunction delta(const WindowFunction& f, std::span<const std::int64_t> h) {
  const IntegerBox next = f.box.shrink(h);
  if (next.empty()) throw WindowExhausted("window exhausted by a difference step");
  std::vector<Complex> out(next.size());
  Point y, yh;
  for (std::size_t i = 0; i < out.size(); ++i) {
    y = next.point(i);
    yh = y;
    for (std::size_t a = 0; a < y.size(); ++a) yh[a] += h[a];
    out[i] = f.values[f.box.index(yh)] - f.values[f.box.index(y)];
  }
  return {next, std::move(out)};
}

FiniteFunction apply_differences(const FiniteFunction& f,
                                 const std::vector<Index>& shifts) {
  FiniteFunction cur = f;
  for (Index h : shifts) cur = delta(cur, h);
  return cur;
}

WindowFunction apply_differences(const WindowFunction& f,
                                 const std::vector<Point>& shifts) {
  WindowFunction cur = f;
  for (const auto& h : shifts) cur = delta(cur, h);
  return cur;
}

// ---------------------------------------------------------------------------
// Polynomial tests

PolyTest is_polynomial(const FiniteFunction& f, int n, double tol) {
  if (n < 0) throw InvalidArgument("degree must be >= 0");
  const auto table = finite_ratio_table(f, n + 1);
  double worst = 0.0;
  for (Index h = 1; h < table.size(); ++h) {
    worst = std::max(worst, min_prefix(table[h], n + 1));
  }
  return {worst < tol, worst};
}

PolyTest is_polynomial(const WindowFunction& f, int n, double tol) {
  if (n < 0) throw InvalidArgument("degree must be >= 0");
  if (f.box.radius() < n + 2) {
    throw WindowExhausted("window radius " + std::to_string(f.box.radius()) +
                          " is too small for degree " + std::to_string(n));
  }
  return window_test_from(f, window_ratio_table(f, n + 1, n + 1), n, tol);
}

std::optional<PolynomialCertificate> min_degree(const FiniteFunction& f,
                                                int n_max, double tol) {
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  // Low degrees are tried on a short table first; the table doubles in depth
  // until it covers n_max + 1 differences.
  int depth = 0;
  for (int kmax = 1;; kmax = std::min(2 * kmax, n_max + 1)) {
    const auto table = finite_ratio_table(f, kmax);
    for (int n = depth; n < kmax; ++n) {
      double worst = 0.0;
      for (Index h = 1; h < table.size(); ++h) {
        worst = std::max(worst, min_prefix(table[h], n + 1));
      }
      if (worst < tol) return PolynomialCertificate{n, worst, std::nullopt};
    }
    depth = kmax;
    if (kmax == n_max + 1) return std::nullopt;
  }
}

std::optional<PolynomialCertificate> min_degree(const WindowFunction& f,
                                                int n_max, double tol) {
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  const int usable = std::min<std::int64_t>(n_max, f.box.radius() - 2);
  if (usable < 0) {
    throw WindowExhausted("window radius " + std::to_string(f.box.radius()) +
                          " admits no polynomial test");
  }
  const auto table = window_ratio_table(f, usable + 1, 1);
  for (int n = 0; n <= usable; ++n) {
    const auto t = window_test_from(f, table, n, tol);
    if (t.polynomial) {
      PolynomialCertificate cert{n, t.residual, std::nullopt};
      cert.fit = fit_polynomial_window(f, n, tol);
      return cert;
    }
  }
  if (usable < n_max) {
    throw WindowExhausted("no certificate up to degree " + std::to_string(usable) +
                          "; window radius " + std::to_string(f.box.radius()) +
                          " is too small for degree " + std::to_string(usable + 1));
  }
  return std::nullopt;
}

ConstancyVerdict lemma5_constancy(const FiniteFunction& f, double tol) {
  ConstancyVerdict v;
  double spread = 0.0;
  for (const auto& z : f.values) spread = std::max(spread, std::abs(z - f.values[0]));
  v.constant = spread < tol;
  v.depth = static_cast<int>(std::min<std::size_t>(f.group.size(), 64));
  const auto cert = min_degree(f, v.depth, tol);
  if (cert) {
    v.polynomial = true;
    v.degree = cert->degree;
    v.residual = cert->residual;
  } else {
    v.residual = is_polynomial(f, v.depth, tol).residual;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Quadratic functional equation

namespace {

void check_quadratic_premise(const std::vector<Complex>& values, Complex at_zero,
                             const std::function<Complex(std::size_t)>& at_neg) {
  constexpr double kTol = 1e-12;
  if (std::abs(at_zero) > kTol) throw InvalidArgument("phi(0) must be 0");
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double scale = std::max(1.0, std::abs(values[i]));
    if (std::abs(values[i].imag()) > kTol * scale) {
      throw InvalidArgument("phi must be real");
    }
    if (std::abs(values[i] - at_neg(i)) > kTol * scale) {
      throw InvalidArgument("phi must be symmetric");
    }
  }
}

}  // namespace

QuadraticResidual quadratic_check(const FiniteFunction& phi) {
  const auto& g = phi.group;
  check_quadratic_premise(phi.values, phi.values[0],
                          [&](std::size_t i) { return phi.values[g.neg(i)]; });
  QuadraticResidual out;
  Index bu = 0, bv = 0;
  for (Index u = 0; u < g.size(); ++u) {
    for (Index v = 0; v < g.size(); ++v) {
      const double r = std::abs(phi[g.add(u, v)] + phi[g.sub(u, v)] -
                                2.0 * phi[u] - 2.0 * phi[v]);
      if (r > out.residual) {
        out.residual = r;
        bu = u;
        bv = v;
      }
    }
  }
  out.u = g.element(bu).coords;
  out.v = g.element(bv).coords;
  return out;
}

QuadraticResidual quadratic_check(const WindowFunction& phi) {
  const auto& box = phi.box;
  if (box.radius() < 1) {
    throw WindowExhausted("quadratic check needs a window of radius >= 1");
  }
  const Point zero(box.dim(), 0);
  check_quadratic_premise(phi.values, phi.at(zero), [&](std::size_t i) {
    Point y = box.point(i);
    for (auto& c : y) c = -c;
    return box.contains(y) ? phi.at(y) : phi.values[i];
  });
  QuadraticResidual out{0.0, zero, zero};
  Point s(box.dim()), d(box.dim());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Point u = box.point(i);
    for (std::size_t j = 0; j < box.size(); ++j) {
      const Point v = box.point(j);
      for (std::size_t a = 0; a < box.dim(); ++a) {
        s[a] = u[a] + v[a];
        d[a] = u[a] - v[a];
      }
      if (!box.contains(s) || !box.contains(d)) continue;
      const double r = std::abs(phi.at(s) + phi.at(d) - 2.0 * phi.values[i] -
                                2.0 * phi.values[j]);
      if (r > out.residual) {
        out.residual = r;
        out.u = u;
        out.v = v;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fitting

namespace {

bool integer_valued(const std::vector<Complex>& values) {
  constexpr double kLimit = 4503599627370496.0;  // 2^52
  for (const auto& z : values) {
    for (double part : {z.real(), z.imag()}) {
      if (!std::isfinite(part) || std::abs(part) >= kLimit ||
          part != std::round(part)) {
        return false;
      }
    }
  }
  return true;
}

double monomial_value(const Exponent& e, const Point& y, double scale) {
  double m = 1.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (int k = 0; k < e[i]; ++k) m *= static_cast<double>(y[i]) / scale;
  }
  return m;
}

// Exact solve of the overdetermined system by reduction of the augmented
// matrix [A | re | im]. Returns nullopt when inconsistent.
std::optional<std::pair<Polynomial, Polynomial>> exact_fit(
    const WindowFunction& f, const std::vector<Exponent>& monos) {
  const std::size_t rows = f.values.size();
  const std::size_t cols = monos.size();
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 2));
  for (std::size_t r = 0; r < rows; ++r) {
    const Point y = f.box.point(r);
    for (std::size_t c = 0; c < cols; ++c) {
      boost::multiprecision::cpp_int v = 1;
      for (std::size_t i = 0; i < y.size(); ++i) {
        for (int k = 0; k < monos[c][i]; ++k) v *= y[i];
      }
      m[r][c] = Rational(v);
    }
    m[r][cols] = Rational(static_cast<long long>(f.values[r].real()));
    m[r][cols + 1] = Rational(static_cast<long long>(f.values[r].imag()));
  }
  std::vector<std::size_t> pivot_col;
  std::size_t pr = 0;
  for (std::size_t c = 0; c < cols && pr < rows; ++c) {
    std::size_t sel = pr;
    while (sel < rows && m[sel][c] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(m[pr], m[sel]);
    const Rational inv = 1 / m[pr][c];
    for (std::size_t k = c; k < cols + 2; ++k) m[pr][k] *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pr || m[r][c] == 0) continue;
      const Rational factor = m[r][c];
      for (std::size_t k = c; k < cols + 2; ++k) m[r][k] -= factor * m[pr][k];
    }
    pivot_col.push_back(c);
    ++pr;
  }
  for (std::size_t r = pr; r < rows; ++r) {
    if (m[r][cols] != 0 || m[r][cols + 1] != 0) return std::nullopt;
  }
  Polynomial re(f.box.dim()), im(f.box.dim());
  for (std::size_t k = 0; k < pivot_col.size(); ++k) {
    re.set(monos[pivot_col[k]], static_cast<double>(m[k][cols]));
    im.set(monos[pivot_col[k]], static_cast<double>(m[k][cols + 1]));
  }
  return std::make_pair(std::move(re), std::move(im));
}

}  // namespace

std::optional<PolynomialFit> fit_polynomial_window(const WindowFunction& f,
                                                   int d_max, double tol) {
  if (d_max < 0) throw InvalidArgument("d_max must be >= 0");
  if (f.values.empty()) throw WindowExhausted("empty window");
  const std::int64_t radius = std::max<std::int64_t>(f.box.radius(), 0);
  const int cap = static_cast<int>(std::min<std::int64_t>(d_max, std::max<std::int64_t>(radius - 2, 0)));
  const bool exact = integer_valued(f.values);
  // Least squares works on coordinates scaled into [-1, 1].
  double scale = 1.0;
  for (std::size_t i = 0; i < f.box.dim(); ++i) {
    scale = std::max({scale, static_cast<double>(std::abs(f.box.lo[i])),
                      static_cast<double>(std::abs(f.box.hi[i]))});
  }
  for (int d = 0; d <= cap; ++d) {
    const auto monos = monomials_up_to(f.box.dim(), d);
    if (exact) {
      auto sol = exact_fit(f, monos);
      if (sol) {
        return PolynomialFit{d, std::move(sol->first), std::move(sol->second),
                             0.0, true};
      }
      continue;
    }
    const auto rows = static_cast<Eigen::Index>(f.values.size());
    const auto cols = static_cast<Eigen::Index>(monos.size());
    Eigen::MatrixXd a(rows, cols);
    Eigen::MatrixXd b(rows, 2);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Point y = f.box.point(static_cast<std::size_t>(r));
      for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = monomial_value(monos[c], y, scale);
      b(r, 0) = f.values[r].real();
      b(r, 1) = f.values[r].imag();
    }
    const Eigen::MatrixXd x = a.colPivHouseholderQr().solve(b);
    const double err = (a * x - b).cwiseAbs().maxCoeff();
    if (!(err < tol)) continue;
    Polynomial re(f.box.dim()), im(f.box.dim());
    for (Eigen::Index c = 0; c < cols; ++c) {
      const int deg = d == 0 ? 0 : [&] {
        int s = 0;
        for (int k : monos[c]) s += k;
        return s;
      }();
      const double unscale = std::pow(scale, -deg);
      re.set(monos[c], x(c, 0) * unscale);
      im.set(monos[c], x(c, 1) * unscale);
    }
    return PolynomialFit{d, re.pruned(1e-10), im.pruned(1e-10), err, false};
  }
  return std::nullopt;
}

}  // namespace qlab
