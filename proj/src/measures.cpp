#include "qlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qlab/error.hpp"

namespace qlab {

namespace {

constexpr double kSumTol = 1e-12;
constexpr double kDerivedTol = 1e-9;

void require_same(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b,
                  const char* what) {
  if (!(a == b)) {
    throw GroupMismatch(std::string(what) + ": " + a.to_string() + " vs " +
                        b.to_string());
  }
}

// In-place separable transform: along every axis apply the n_j-point sum
// with kernel exp(sign * 2 pi i t y / n_j).
void axis_transform(const FiniteAbelianGroup& g, std::vector<Complex>& vals,
                    bool inverse) {
  std::size_t stride = g.size();
  for (std::size_t axis = 0; axis < g.rank(); ++axis) {
    const std::int64_t n = g.orders()[axis];
    stride /= static_cast<std::size_t>(n);
    if (n == 1) continue;
    std::vector<Complex> w(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
      w[k] = inverse ? std::conj(root_of_unity(k, n)) : root_of_unity(k, n);
    }
    std::vector<Complex> line(w.size()), out(w.size());
    for (Index base = 0; base < g.size(); ++base) {
      if (g.coord(base, axis) != 0) continue;
      for (std::int64_t t = 0; t < n; ++t) line[t] = vals[base + t * stride];
      for (std::int64_t y = 0; y < n; ++y) {
        Complex acc = 0.0;
        for (std::int64_t t = 0; t < n; ++t) acc += line[t] * w[(t * y) % n];
        out[y] = inverse ? acc / static_cast<double>(n) : acc;
      }
      for (std::int64_t y = 0; y < n; ++y) vals[base + y * stride] = out[y];
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Distribution

Distribution::Distribution(FiniteAbelianGroup group, std::vector<double> probs)
    : group_(std::move(group)), probs_(std::move(probs)) {
  if (probs_.size() != group_.size()) {
    throw InvalidDistribution("expected " + std::to_string(group_.size()) +
                              " probabilities, got " +
                              std::to_string(probs_.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i])) {
      throw InvalidDistribution("negative or non-finite mass at " +
                                group_.element_string(i));
    }
    sum += probs_[i];
  }
  if (std::abs(sum - 1.0) > kSumTol) {
    throw InvalidDistribution("masses sum to " + std::to_string(sum));
  }
}

Distribution Distribution::degenerate(const FiniteAbelianGroup& g, Index x) {
  if (x >= g.size()) throw InvalidElement("point mass outside the group");
  std::vector<double> p(g.size(), 0.0);
  p[x] = 1.0;
  return Distribution(g, std::move(p));
}

Distribution Distribution::uniform(const FiniteAbelianGroup& g) {
  return haar(Subgroup::whole(g));
}

std::vector<Index> Distribution::support(double floor) const {
  std::vector<Index> out;
  for (Index x = 0; x < probs_.size(); ++x) {
    if (probs_[x] > floor) out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transforms

CharacteristicFunction char_fn(const Distribution& mu) {
  std::vector<Complex> vals(mu.probs().begin(), mu.probs().end());
  axis_transform(mu.group(), vals, false);
  return {mu.group(), std::move(vals)};
}

std::vector<double> inverse_transform(const CharacteristicFunction& f) {
  std::vector<Complex> vals = f.values;
  axis_transform(f.group, vals, true);
  std::vector<double> out(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) out[i] = vals[i].real();
  return out;
}

Distribution inverse_char_fn(const CharacteristicFunction& f) {
  const auto& g = f.group;
  if (f.values.size() != g.size()) {
    throw InvalidDistribution("characteristic function has the wrong length");
  }
  if (std::abs(f.values[0] - 1.0) > kSumTol) {
    throw InvalidDistribution("f(0) != 1");
  }
  for (Index y = 0; y < g.size(); ++y) {
    if (std::abs(f.values[g.neg(y)] - std::conj(f.values[y])) > kSumTol) {
      throw InvalidDistribution("f is not Hermitian at " + g.element_string(y));
    }
  }
  auto masses = inverse_transform(f);
  const auto worst = std::min_element(masses.begin(), masses.end());
  if (*worst < -kDerivedTol) {
    const Index at = static_cast<Index>(worst - masses.begin());
    throw NotPositiveDefinite(*worst, g.element(at).coords,
                              "inverse transform has mass " +
                                  std::to_string(*worst) + " at " +
                                  g.element_string(at));
  }
  for (double& m : masses) m = std::max(m, 0.0);
  return Distribution(g, std::move(masses));
}

Distribution convolve(const Distribution& mu, const Distribution& nu) {
  require_same(mu.group(), nu.group(), "convolve");
  const auto& g = mu.group();
  std::vector<double> out(g.size(), 0.0);
  for (Index a : mu.support(0.0)) {
    for (Index b : nu.support(0.0)) out[g.add(a, b)] += mu[a] * nu[b];
  }
  return Distribution(g, std::move(out));
}

CharacteristicFunction multiply(const CharacteristicFunction& a,
                                const CharacteristicFunction& b) {
  require_same(a.group, b.group, "multiply");
  CharacteristicFunction out{a.group, a.values};
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= b.values[i];
  return out;
}

double max_abs_diff(const CharacteristicFunction& a,
                    const CharacteristicFunction& b) {
  require_same(a.group, b.group, "compare");
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  }
  return m;
}

double max_abs_diff(const Distribution& a, const Distribution& b) {
  require_same(a.group(), b.group(), "compare");
  double m = 0.0;
  for (std::size_t i = 0; i < a.probs().size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Haar measures and supports

Distribution haar(const Subgroup& k) {
  std::vector<double> p(k.parent().size(), 0.0);
  const double w = 1.0 / static_cast<double>(k.size());
  for (Index x : k.elements()) p[x] = w;
  return Distribution(k.parent(), std::move(p));
}

CharacteristicFunction haar_cf(const Subgroup& k) {
  const auto ann = annihilator(k);
  std::vector<Complex> vals(k.parent().size(), 0.0);
  for (Index y : ann.elements()) vals[y] = 1.0;
  return {k.parent(), std::move(vals)};
}

Subgroup support_bound(const Distribution& mu) {
  const auto f = char_fn(mu);
  const auto& g = mu.group();
  std::vector<Index> e;
  for (Index y = 0; y < g.size(); ++y) {
    if (std::abs(f[y] - 1.0) <= kDerivedTol) e.push_back(y);
  }
  std::optional<Subgroup> es;
  try {
    es.emplace(g, std::move(e));
  } catch (const InvalidSubgroup&) {
    throw NumericalInconsistency("{y : f(y) = 1} is not a subgroup");
  }
  auto bound = annihilator(*es);
  for (Index x : mu.support()) {
    if (!bound.contains(x)) {
      throw NumericalInconsistency("mass at " + g.element_string(x) +
                                   " lies outside A(X, E)");
    }
  }
  return bound;
}

std::optional<ShiftFactor> idempotent_shift_factor(const Distribution& mu) {
  const auto f = char_fn(mu);
  const auto& g = mu.group();
  std::vector<Index> n;
  for (Index y = 0; y < g.size(); ++y) {
    const double m = std::abs(f[y]);
    if (std::abs(m - 1.0) <= kDerivedTol) {
      n.push_back(y);
    } else if (m > kDerivedTol) {
      return std::nullopt;
    }
  }
  std::optional<Subgroup> ns;
  try {
    ns.emplace(g, std::move(n));
  } catch (const InvalidSubgroup&) {
    return std::nullopt;
  }
  for (Index x = 0; x < g.size(); ++x) {
    bool matches = true;
    for (Index y : ns->elements()) {
      if (std::abs(f[y] - g.pairing(x, y)) > kDerivedTol) {
        matches = false;
        break;
      }
    }
    if (!matches) continue;
    auto k = annihilator(*ns);
    const auto rebuilt = convolve(Distribution::degenerate(g, x), haar(k));
    if (max_abs_diff(rebuilt, mu) > kDerivedTol) return std::nullopt;
    return ShiftFactor{x, std::move(k)};
  }
  return std::nullopt;
}

bool is_corwin_haar(const Distribution& mu) {
  const auto s = idempotent_shift_factor(mu);
  return s && s->k.contains(s->x) && is_corwin(s->k);
}

Distribution push_forward(const Distribution& mu, const GroupHom& alpha) {
  require_same(mu.group(), alpha.source(), "push_forward");
  std::vector<double> out(alpha.target().size(), 0.0);
  for (Index x = 0; x < mu.probs().size(); ++x) out[alpha(x)] += mu[x];
  return Distribution(alpha.target(), std::move(out));
}

// ---------------------------------------------------------------------------
// JointDistribution

namespace {

FiniteAbelianGroup product_of(const std::vector<FiniteAbelianGroup>& groups) {
  std::vector<std::int64_t> orders;
  std::size_t size = 1;
  for (const auto& g : groups) {
    orders.insert(orders.end(), g.orders().begin(), g.orders().end());
    size *= g.size();
    if (size > FiniteAbelianGroup::kMaxOrder) {
      throw GroupTooLarge("joint product group exceeds the size cap");
    }
  }
  return FiniteAbelianGroup(std::move(orders));
}

std::vector<double> product_probs(const std::vector<Distribution>& ms) {
  std::vector<double> p{1.0};
  for (const auto& m : ms) {
    std::vector<double> next;
    next.reserve(p.size() * m.probs().size());
    for (double a : p) {
      for (double b : m.probs()) next.push_back(a * b);
    }
    p = std::move(next);
  }
  return p;
}

std::vector<FiniteAbelianGroup> groups_of(const std::vector<Distribution>& ms) {
  std::vector<FiniteAbelianGroup> gs;
  for (const auto& m : ms) gs.push_back(m.group());
  return gs;
}

}  // namespace

JointDistribution::JointDistribution(std::vector<FiniteAbelianGroup> groups,
                                     std::vector<double> probs)
    : groups_(std::move(groups)),
      dist_(product_of(groups_), std::move(probs)) {
  if (groups_.empty()) throw InvalidArgument("joint needs at least one factor");
  block_.assign(groups_.size(), 1);
  for (std::size_t j = groups_.size(); j-- > 1;) {
    block_[j - 1] = block_[j] * groups_[j].size();
  }
}

JointDistribution::JointDistribution(std::vector<Distribution> marginals)
    : JointDistribution(groups_of(marginals), product_probs(marginals)) {}

std::vector<Index> JointDistribution::split(Index joint) const {
  std::vector<Index> parts(groups_.size());
  for (std::size_t j = 0; j < groups_.size(); ++j) {
    parts[j] = (joint / block_[j]) % groups_[j].size();
  }
  return parts;
}

Index JointDistribution::combine(const std::vector<Index>& parts) const {
  Index idx = 0;
  for (std::size_t j = 0; j < groups_.size(); ++j) idx += parts[j] * block_[j];
  return idx;
}

Distribution JointDistribution::marginal(std::size_t j) const {
  if (j >= groups_.size()) throw InvalidArgument("marginal index out of range");
  std::vector<double> p(groups_[j].size(), 0.0);
  for (Index x = 0; x < dist_.probs().size(); ++x) {
    p[(x / block_[j]) % groups_[j].size()] += dist_[x];
  }
  // Marginal sums may drift from 1 by a few ulps.
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= s;
  return Distribution(groups_[j], std::move(p));
}

std::vector<Distribution> JointDistribution::marginals() const {
  std::vector<Distribution> out;
  for (std::size_t j = 0; j < groups_.size(); ++j) out.push_back(marginal(j));
  return out;
}

double JointDistribution::independence_defect() const {
  const auto prod = product_probs(marginals());
  double m = 0.0;
  for (std::size_t i = 0; i < prod.size(); ++i) {
    m = std::max(m, std::abs(prod[i] - dist_[i]));
  }
  return m;
}

JointDistribution linear_form_joint(
    const JointDistribution& j, const std::vector<std::vector<GroupHom>>& rows) {
  if (rows.empty()) throw InvalidArgument("linear_form_joint needs rows");
  std::vector<FiniteAbelianGroup> targets;
  for (const auto& row : rows) {
    if (row.size() != j.arity()) {
      throw InvalidArgument("each row needs one homomorphism per component");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      require_same(row[c].source(), j.groups()[c], "linear form source");
      require_same(row[c].target(), row[0].target(), "linear form target");
    }
    targets.push_back(row[0].target());
  }
  JointDistribution shape(targets,
                          product_probs([&] {
                            std::vector<Distribution> ds;
                            for (const auto& t : targets) {
                              ds.push_back(Distribution::degenerate(t, 0));
                            }
                            return ds;
                          }()));
  std::vector<double> out(shape.product_group().size(), 0.0);
  std::vector<Index> image(rows.size());
  for (Index x = 0; x < j.product_group().size(); ++x) {
    const double p = j.as_distribution()[x];
    if (p == 0.0) continue;
    const auto parts = j.split(x);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Index acc = 0;
      for (std::size_t c = 0; c < parts.size(); ++c) {
        acc = targets[i].add(acc, rows[i][c](parts[c]));
      }
      image[i] = acc;
    }
    out[shape.combine(image)] += p;
  }
  return JointDistribution(std::move(targets), std::move(out));
}

}  // namespace qlab
