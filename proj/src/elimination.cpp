#include "qlab/elimination.hpp"

#include <algorithm>
#include <cmath>

#include "qlab/error.hpp"

namespace qlab {

namespace {

double sup_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

// Y finite: functions on Y^2 live on y.product(y), index u * |Y| + v.
struct FiniteSpace {
  FiniteAbelianGroup y;
  FiniteAbelianGroup y2;

  explicit FiniteSpace(FiniteAbelianGroup g) : y(g), y2(g.product(g)) {}

  using Fn2 = FiniteFunction;
  using Elem = Index;

  Index combine(Index u, Index v) const { return u * y.size() + v; }
  Fn2 step(const Fn2& f, Elem s, Elem t) const { return delta(f, combine(s, t)); }
  Elem elem(const Point& p) const { return y.index_of(GroupElement{p}); }
  Point point(Elem e) const { return y.element(e).coords; }
  Fn2 lift(const std::function<Complex(Index, Index)>& fn) const {
    std::vector<Complex> v(y2.size());
    for (Index u = 0; u < y.size(); ++u) {
      for (Index w = 0; w < y.size(); ++w) v[combine(u, w)] = fn(u, w);
    }
    return {y2, std::move(v)};
  }
  Fn2 lift_u(const FiniteFunction& p) const {
    return lift([&](Index u, Index) { return p[u]; });
  }
  Fn2 lift_v(const FiniteFunction& q) const {
    return lift([&](Index, Index v) { return q[v]; });
  }
};

struct WindowSpace {
  std::int64_t radius;
  IntegerBox box;

  explicit WindowSpace(std::int64_t n) : radius(n), box(IntegerBox::centered(n, 2)) {}

  using Fn2 = WindowFunction;
  using Elem = std::int64_t;

  Fn2 step(const Fn2& f, Elem s, Elem t) const {
    const Point h{s, t};
    return delta(f, h);
  }
  Elem elem(const Point& p) const { return p.at(0); }
  Point point(Elem e) const { return {e}; }
  Fn2 lift(const std::function<Complex(std::int64_t, std::int64_t)>& fn) const {
    return WindowFunction::sample(box, [&](std::span<const std::int64_t> p) {
      return fn(p[0], p[1]);
    });
  }
  Fn2 lift_u(const WindowFunction& p) const {
    return lift([&](std::int64_t u, std::int64_t) { return p.at(Point{u}); });
  }
  Fn2 lift_v(const WindowFunction& q) const {
    return lift([&](std::int64_t, std::int64_t v) { return q.at(Point{v}); });
  }
};

template <class Space>
typename Space::Fn2 apply_steps(const Space& sp, typename Space::Fn2 f,
                                const std::vector<ShiftStep>& steps) {
  for (const auto& st : steps) f = sp.step(f, sp.elem(st.s), sp.elem(st.t));
  return f;
}

template <class Space>
struct ChainInputs {
  typename Space::Fn2 lhs;
  typename Space::Fn2 p;
  typename Space::Fn2 q;
  typename Space::Fn2 r;
};

double premise_scale(const std::vector<Complex>& lhs) {
  return std::max(1.0, sup_abs(lhs));
}

// Evaluates every sample's chain and fills in the residuals.
template <class Space>
void evaluate(const Space& sp, const ChainInputs<Space>& in, int l,
              EliminationTrace& tr) {
  {
    double m = 0.0;
    for (std::size_t i = 0; i < in.lhs.values.size(); ++i) {
      m = std::max(m, std::abs(in.lhs.values[i] - in.p.values[i] - in.q.values[i] -
                               in.r.values[i]));
    }
    tr.premise_residual = m;
  }
  for (auto& sample : tr.samples) {
    sample.p_residual = sup_abs(apply_steps(sp, in.p, sample.steps).values);
    tr.final_residual = std::max(tr.final_residual, sample.p_residual);
    tr.r_chain_residual =
        std::max(tr.r_chain_residual, sup_abs(apply_steps(sp, in.r, sample.steps).values));
    tr.lhs_residual =
        std::max(tr.lhs_residual, sup_abs(apply_steps(sp, in.lhs, sample.steps).values));
    auto rr = in.r;
    const auto h = sp.elem(sample.h);
    const auto k = sp.elem(sample.k);
    for (int i = 0; i <= l; ++i) rr = sp.step(rr, h, k);
    tr.r_repeated_residual = std::max(tr.r_repeated_residual, sup_abs(rr.values));
  }
}

void decide(EliminationTrace& tr, double premise_scale_value, double poly_tol,
            const EliminationOptions& opt) {
  const bool equation_ok =
      tr.premise_residual <= opt.tol.algebraic * premise_scale_value;
  const bool r_ok = tr.r_repeated_residual < poly_tol;
  tr.premise_ok = equation_ok && r_ok;
  if (!tr.premise_ok && opt.strict_premise) {
    if (!equation_ok) {
      throw PremiseViolated("equation residual " + std::to_string(tr.premise_residual) +
                            " exceeds the premise tolerance");
    }
    throw PremiseViolated("R is not annihilated by Delta_(h,k)^(l+1): residual " +
                          std::to_string(tr.r_repeated_residual));
  }
  tr.certified = tr.premise_ok && tr.final_residual < poly_tol;
}

void check_window_cover(const WindowFunction& f, std::int64_t need, const char* what) {
  const Point lo{-need}, hi{need};
  if (f.box.dim() != 1 || !f.box.contains(lo) || !f.box.contains(hi)) {
    throw WindowExhausted(std::string(what) + " must cover |y| <= " + std::to_string(need));
  }
}

std::int64_t required_radius(const std::vector<SampleTrace>& samples) {
  std::int64_t need = 0;
  for (const auto& s : samples) {
    std::int64_t us = 0, vs = 0;
    for (const auto& st : s.steps) {
      us += std::abs(st.s.at(0));
      vs += std::abs(st.t.at(0));
    }
    need = std::max(need, (std::max(us, vs) + 1) / 2);
  }
  return need;
}

std::vector<Index> k_samples(const FiniteAbelianGroup& y, Index h) {
  std::vector<Index> ks;
  if (y.size() <= 32) {
    for (Index k = 0; k < y.size(); ++k) ks.push_back(k);
  } else {
    ks = {0, h};
  }
  return ks;
}

void check_distinct(const std::vector<GroupHom>& b, const FiniteAbelianGroup& y) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(b[i].source() == y) || !b[i].is_automorphism()) {
      throw InvalidArgument("b_" + std::to_string(i + 1) + " is not an automorphism of " +
                            y.to_string());
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (b[i] == b[j]) {
        throw InvalidArgument("b_" + std::to_string(j + 1) + " and b_" +
                              std::to_string(i + 1) + " coincide");
      }
    }
  }
}

std::string lemma3_operator(std::size_t n) {
  return "Delta_(h,k)^(l+1) Delta_(h,0) " +
         std::string(n > 1 ? "Delta_(h,k_" + std::to_string(n) + ") ... " : "") +
         "Delta_(h,k_1) = Delta_h^(l+n+2) on P(u)";
}

template <class Space>
void certify_degree(EliminationTrace& tr, const typename Space::Fn2& p, double tol) {
  if (!tr.certified) return;
  try {
    const auto cert = min_degree(p, tr.degree_bound, tol);
    if (cert) tr.degree = cert->degree;
  } catch (const WindowExhausted&) {
    tr.degree.reset();
  }
}

// Shift steps for one (h, k), generic over the element type.
template <class Space>
std::vector<ShiftStep> lemma3_steps(
    const Space& sp, typename Space::Elem h, typename Space::Elem k, int l, std::size_t n,
    const std::function<typename Space::Elem(std::size_t, typename Space::Elem)>& b_apply,
    const std::function<typename Space::Elem(std::size_t, typename Space::Elem)>& b_inverse,
    const std::function<typename Space::Elem(typename Space::Elem, typename Space::Elem)>& add,
    const std::function<typename Space::Elem(typename Space::Elem)>& neg,
    typename Space::Elem zero) {
  std::vector<ShiftStep> steps;
  for (std::size_t m = 1; m + 1 <= n; ++m) {
    const std::size_t killed = n - m;  // 0-based index of psi_{n-m+1}
    const auto km = neg(b_inverse(killed, h));
    ShiftStep st{sp.point(h), sp.point(km), "eliminate psi_" + std::to_string(killed + 1), {}};
    for (std::size_t j = 0; j < killed; ++j) {
      st.psi_shifts.push_back(sp.point(add(h, b_apply(j, km))));
    }
    steps.push_back(std::move(st));
  }
  steps.push_back({sp.point(h), sp.point(neg(b_inverse(0, h))), "eliminate psi_1", {}});
  steps.push_back({sp.point(h), sp.point(zero), "eliminate Q", {}});
  for (int i = 0; i <= l; ++i) {
    steps.push_back({sp.point(h), sp.point(k), "annihilate R", {}});
  }
  return steps;
}

}  // namespace

// ---------------------------------------------------------------------------

FiniteFunction substitute_and_subtract(const FiniteFunction& f,
                                       const FiniteAbelianGroup& y, Index s, Index t) {
  FiniteSpace sp(y);
  if (!(f.group == sp.y2)) throw GroupMismatch("function does not live on Y x Y");
  return sp.step(f, s, t);
}

WindowFunction substitute_and_subtract(const WindowFunction& f, std::int64_t s,
                                       std::int64_t t) {
  if (f.box.dim() != 2) throw InvalidArgument("expected a function on a window of Z^2");
  const Point h{s, t};
  return delta(f, h);
}

std::pair<FiniteFunction, FiniteFunction> heyde_pq(const FiniteAbelianGroup& y,
                                                   const FiniteFunction& psi1,
                                                   const FiniteFunction& psi2,
                                                   const GroupHom& b) {
  const auto ib = GroupHom::identity(y) + b;
  const auto p = FiniteFunction::sample(
      y, [&](Index v) { return psi1[ib(v)] + psi2[y.scale(b(v), 2)]; });
  const auto q = FiniteFunction::sample(
      y, [&](Index v) { return psi1[y.scale(v, 2)] + psi2[ib(v)]; });
  return {p, q};
}

// ---------------------------------------------------------------------------
// Single-function mode

EliminationTrace run_lemma3(const FiniteShiftProblem& pr, const EliminationOptions& opt) {
  const auto& y = pr.y;
  const std::size_t n = pr.psi.size();
  if (n == 0 || pr.b.size() != n) throw InvalidArgument("need one b_j per psi_j");
  if (pr.l < 0) throw InvalidArgument("l must be >= 0");
  check_distinct(pr.b, y);
  FiniteSpace sp(y);
  for (const auto& f : pr.psi) {
    if (!(f.group == y)) throw GroupMismatch("psi_j must live on Y");
  }
  if (!(pr.p.group == y) || !(pr.q.group == y) || !(pr.r.group == sp.y2)) {
    throw GroupMismatch("P, Q must live on Y and R on Y x Y");
  }
  std::vector<GroupHom> binv;
  for (const auto& b : pr.b) binv.push_back(b.inverse());

  EliminationTrace tr;
  tr.mode = "lemma3";
  tr.order = pr.l + static_cast<int>(n) + 2;
  tr.final_operator = lemma3_operator(n);
  tr.degree_bound = std::max(static_cast<int>(n), pr.l);
  for (Index h = 1; h < y.size(); ++h) {
    for (Index k : k_samples(y, h)) {
      SampleTrace s{sp.point(h), sp.point(k), {}, 0.0};
      s.steps = lemma3_steps<FiniteSpace>(
          sp, h, k, pr.l, n, [&](std::size_t j, Index e) { return pr.b[j](e); },
          [&](std::size_t j, Index e) { return binv[j](e); },
          [&](Index a, Index c) { return y.add(a, c); },
          [&](Index a) { return y.neg(a); }, Index{0});
      tr.samples.push_back(std::move(s));
    }
  }
  ChainInputs<FiniteSpace> in{
      sp.lift([&](Index u, Index v) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += pr.psi[j][y.add(u, pr.b[j](v))];
        return acc;
      }),
      sp.lift_u(pr.p), sp.lift_v(pr.q), pr.r};
  evaluate(sp, in, pr.l, tr);
  decide(tr, premise_scale(in.lhs.values), opt.tol.finite_poly, opt);
  certify_degree<FiniteSpace>(tr, pr.p, opt.tol.finite_poly);
  return tr;
}

EliminationTrace run_lemma3(const WindowShiftProblem& pr, const EliminationOptions& opt) {
  const std::size_t n = pr.psi.size();
  if (n == 0 || pr.b.size() != n) throw InvalidArgument("need one b_j per psi_j");
  if (pr.l < 0) throw InvalidArgument("l must be >= 0");
  for (std::size_t i = 0; i < n; ++i) {
    if (pr.b[i] != 1 && pr.b[i] != -1) {
      throw InvalidArgument("automorphisms of Z are +1 and -1");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (pr.b[i] == pr.b[j]) throw InvalidArgument("b_j must be distinct");
    }
  }
  WindowSpace sp(pr.radius);
  EliminationTrace tr;
  tr.mode = "lemma3";
  tr.order = pr.l + static_cast<int>(n) + 2;
  tr.final_operator = lemma3_operator(n);
  tr.degree_bound = std::max(static_cast<int>(n), pr.l);
  for (std::int64_t h : {-2, -1, 1, 2}) {
    for (std::int64_t k = -2; k <= 2; ++k) {
      SampleTrace s{{h}, {k}, {}, 0.0};
      s.steps = lemma3_steps<WindowSpace>(
          sp, h, k, pr.l, n,
          [&](std::size_t j, std::int64_t e) { return pr.b[j] * e; },
          [&](std::size_t j, std::int64_t e) { return pr.b[j] * e; },
          [](std::int64_t a, std::int64_t c) { return a + c; },
          [](std::int64_t a) { return -a; }, std::int64_t{0});
      tr.samples.push_back(std::move(s));
    }
  }
  tr.required_radius = required_radius(tr.samples);
  if (pr.radius < tr.required_radius) {
    throw WindowExhausted("the chain needs a square window of radius " +
                          std::to_string(tr.required_radius) + ", got " +
                          std::to_string(pr.radius));
  }
  for (const auto& f : pr.psi) check_window_cover(f, 2 * pr.radius, "psi_j");
  check_window_cover(pr.p, pr.radius, "P");
  check_window_cover(pr.q, pr.radius, "Q");
  if (!(pr.r.box == sp.box)) throw InvalidArgument("R must live on the square window");
  ChainInputs<WindowSpace> in{
      sp.lift([&](std::int64_t u, std::int64_t v) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += pr.psi[j].at(Point{u + pr.b[j] * v});
        return acc;
      }),
      sp.lift_u(pr.p), sp.lift_v(pr.q), pr.r};
  evaluate(sp, in, pr.l, tr);
  decide(tr, premise_scale(in.lhs.values), opt.tol.window_poly, opt);
  certify_degree<WindowSpace>(tr, pr.p, opt.tol.window_poly);
  return tr;
}

// ---------------------------------------------------------------------------
// Heyde mode

namespace {

std::string heyde_operator() {
  return "Delta_(h,k)^(l+1) Delta_(h3,0) Delta_(2h2,-(I+b)h2) Delta_((I+b)h1,-2bh1) "
         "= Delta_h^(l+4) on P(u) with (I+b)h1 = 2h2 = h3 = h";
}

}  // namespace

EliminationTrace run_heyde_chain(const FiniteHeydeProblem& pr,
                                 const EliminationOptions& opt) {
  const auto& y = pr.y;
  if (y.size() % 2 == 0) {
    throw InvalidArgument("the Heyde chain needs a group of odd order; " + y.to_string() +
                          " has order " + std::to_string(y.size()));
  }
  if (!(pr.b.source() == y) || !pr.b.is_automorphism()) {
    throw InvalidArgument("b must be an automorphism of Y");
  }
  if (pr.l < 0) throw InvalidArgument("l must be >= 0");
  const auto id = GroupHom::identity(y);
  const auto ib = id + pr.b;
  if (!ib.is_bijective()) throw InvalidArgument("I + b is not invertible");
  const auto ib_inv = ib.inverse();
  const auto half = multiplication_map(y, 2).inverse();
  const auto imb = id - pr.b;
  FiniteSpace sp(y);
  if (!(pr.psi1.group == y) || !(pr.psi2.group == y) || !(pr.r.group == sp.y2)) {
    throw GroupMismatch("psi_j must live on Y and R on Y x Y");
  }
  auto [p_default, q_default] = heyde_pq(y, pr.psi1, pr.psi2, pr.b);
  const FiniteFunction p = pr.p ? *pr.p : p_default;
  const FiniteFunction q = pr.q ? *pr.q : q_default;

  EliminationTrace tr;
  tr.mode = "heyde";
  tr.order = pr.l + 4;
  tr.final_operator = heyde_operator();
  tr.degree_bound = std::max(2, pr.l);
  for (Index h = 1; h < y.size(); ++h) {
    const Index h1 = ib_inv(h);
    const Index h2 = half(h);
    for (Index k : k_samples(y, h)) {
      SampleTrace s{sp.point(h), sp.point(k), {}, 0.0};
      s.steps.push_back({sp.point(ib(h1)), sp.point(y.neg(y.scale(pr.b(h1), 2))),
                         "eliminate psi_2",
                         {sp.point(imb(imb(h1)))}});
      s.steps.push_back(
          {sp.point(y.scale(h2, 2)), sp.point(y.neg(ib(h2))), "eliminate psi_1", {}});
      s.steps.push_back({sp.point(h), sp.point(0), "eliminate Q", {}});
      for (int i = 0; i <= pr.l; ++i) {
        s.steps.push_back({sp.point(h), sp.point(k), "annihilate R", {}});
      }
      tr.samples.push_back(std::move(s));
    }
  }
  ChainInputs<FiniteSpace> in{
      sp.lift([&](Index u, Index v) {
        return pr.psi1[y.add(ib(u), y.scale(v, 2))] +
               pr.psi2[y.add(y.scale(pr.b(u), 2), ib(v))];
      }),
      sp.lift_u(p), sp.lift_v(q), pr.r};
  evaluate(sp, in, pr.l, tr);
  decide(tr, premise_scale(in.lhs.values), opt.tol.finite_poly, opt);
  certify_degree<FiniteSpace>(tr, p, opt.tol.finite_poly);
  return tr;
}

EliminationTrace run_heyde_chain(const WindowHeydeProblem& pr,
                                 const EliminationOptions& opt) {
  if (pr.b != 1) {
    throw InvalidArgument("on Z only b = 1 has Ker(I + b) = {0}");
  }
  if (pr.l < 0) throw InvalidArgument("l must be >= 0");
  WindowSpace sp(pr.radius);
  EliminationTrace tr;
  tr.mode = "heyde";
  tr.order = pr.l + 4;
  tr.final_operator = heyde_operator();
  tr.degree_bound = std::max(2, pr.l);
  // (I+b)h1 = 2h2 = h forces h into 2Z.
  for (std::int64_t h : {-2, 2}) {
    const std::int64_t h1 = h / 2;
    const std::int64_t h2 = h / 2;
    for (std::int64_t k = -2; k <= 2; ++k) {
      SampleTrace s{{h}, {k}, {}, 0.0};
      s.steps.push_back({{2 * h1}, {-2 * h1}, "eliminate psi_2", {{0}}});
      s.steps.push_back({{2 * h2}, {-2 * h2}, "eliminate psi_1", {}});
      s.steps.push_back({{h}, {0}, "eliminate Q", {}});
      for (int i = 0; i <= pr.l; ++i) s.steps.push_back({{h}, {k}, "annihilate R", {}});
      tr.samples.push_back(std::move(s));
    }
  }
  tr.required_radius = required_radius(tr.samples);
  if (pr.radius < tr.required_radius) {
    throw WindowExhausted("the chain needs a square window of radius " +
                          std::to_string(tr.required_radius) + ", got " +
                          std::to_string(pr.radius));
  }
  check_window_cover(pr.psi1, 4 * pr.radius, "psi_1");
  check_window_cover(pr.psi2, 4 * pr.radius, "psi_2");
  if (!(pr.r.box == sp.box)) throw InvalidArgument("R must live on the square window");
  const auto half_radius =
      std::min(pr.psi1.box.radius(), pr.psi2.box.radius()) / 2;
  const WindowFunction p =
      pr.p ? *pr.p
           : WindowFunction::sample(half_radius, 1, [&](std::span<const std::int64_t> y) {
               return pr.psi1.at(Point{2 * y[0]}) + pr.psi2.at(Point{2 * y[0]});
             });
  const WindowFunction q =
      pr.q ? *pr.q
           : WindowFunction::sample(half_radius, 1, [&](std::span<const std::int64_t> y) {
               return pr.psi1.at(Point{2 * y[0]}) + pr.psi2.at(Point{2 * y[0]});
             });
  check_window_cover(p, pr.radius, "P");
  check_window_cover(q, pr.radius, "Q");
  ChainInputs<WindowSpace> in{
      sp.lift([&](std::int64_t u, std::int64_t v) {
        return pr.psi1.at(Point{2 * u + 2 * v}) + pr.psi2.at(Point{2 * u + 2 * v});
      }),
      sp.lift_u(p), sp.lift_v(q), pr.r};
  evaluate(sp, in, pr.l, tr);
  decide(tr, premise_scale(in.lhs.values), opt.tol.window_poly, opt);
  certify_degree<WindowSpace>(tr, p, opt.tol.window_poly);
  return tr;
}

// ---------------------------------------------------------------------------
// Replay and validation

double replay_final_residual(const EliminationTrace& trace, const FiniteAbelianGroup& y,
                             const FiniteFunction& p) {
  FiniteSpace sp(y);
  const auto lifted = sp.lift_u(p);
  double m = 0.0;
  for (const auto& s : trace.samples) {
    m = std::max(m, sup_abs(apply_steps(sp, lifted, s.steps).values));
  }
  return m;
}

double replay_final_residual(const EliminationTrace& trace, std::int64_t radius,
                             const WindowFunction& p) {
  WindowSpace sp(radius);
  const auto lifted = sp.lift_u(p);
  double m = 0.0;
  for (const auto& s : trace.samples) {
    m = std::max(m, sup_abs(apply_steps(sp, lifted, s.steps).values));
  }
  return m;
}

namespace {

template <class Space, class BApply, class Sub>
std::optional<std::string> validate_lemma3(const Space& sp, const EliminationTrace& tr,
                                           std::size_t n, int l, BApply b_apply,
                                           Sub sub) {
  if (tr.mode != "lemma3") return "trace is not a lemma3 trace";
  for (std::size_t si = 0; si < tr.samples.size(); ++si) {
    const auto& s = tr.samples[si];
    const std::string where = "sample " + std::to_string(si) + ": ";
    if (s.steps.size() != n + 1 + static_cast<std::size_t>(l) + 1) {
      return where + "wrong number of steps";
    }
    const auto h = sp.elem(s.h);
    for (std::size_t m = 1; m <= n; ++m) {
      const auto& st = s.steps[m - 1];
      const std::size_t killed = n - m;
      const auto km = sp.elem(st.t);
      if (sp.elem(st.s) != h) return where + "step " + std::to_string(m) + " does not shift u by h";
      // The killed term is differenced by h + b_{n-m+1} k_m, which must be 0.
      const auto zero = sub(h, h);
      if (sub(h, sub(zero, b_apply(killed, km))) != zero) {
        return where + "step " + std::to_string(m) + " does not eliminate psi_" +
               std::to_string(killed + 1);
      }
      if (m < n) {
        if (st.psi_shifts.size() != killed) return where + "missing l_{mj} entries";
        for (std::size_t j = 0; j < killed; ++j) {
          // l_{mj} = (b_j - b_{n-m+1}) k_m
          const auto expected = sub(b_apply(j, km), b_apply(killed, km));
          if (sp.elem(st.psi_shifts[j]) != expected) {
            return where + "l_{" + std::to_string(m) + "," + std::to_string(j + 1) +
                   "} does not match (b_j - b_{n-m+1}) k_m";
          }
        }
      }
    }
    const auto& q_step = s.steps[n];
    if (sp.elem(q_step.s) != h || sp.elem(q_step.t) != sub(h, h)) {
      return where + "Q step must be (h, 0)";
    }
    for (std::size_t i = n + 1; i < s.steps.size(); ++i) {
      if (sp.elem(s.steps[i].s) != h || sp.elem(s.steps[i].t) != sp.elem(s.k)) {
        return where + "collapse steps must repeat (h, k)";
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_trace(const EliminationTrace& trace,
                                          const FiniteShiftProblem& pr) {
  FiniteSpace sp(pr.y);
  const auto& y = pr.y;
  return validate_lemma3(
      sp, trace, pr.psi.size(), pr.l, [&](std::size_t j, Index e) { return pr.b[j](e); },
      [&](Index a, Index c) { return y.sub(a, c); });
}

std::optional<std::string> validate_trace(const EliminationTrace& trace,
                                          const WindowShiftProblem& pr) {
  WindowSpace sp(pr.radius);
  return validate_lemma3(
      sp, trace, pr.psi.size(), pr.l,
      [&](std::size_t j, std::int64_t e) { return pr.b[j] * e; },
      [](std::int64_t a, std::int64_t c) { return a - c; });
}

}  // namespace qlab
