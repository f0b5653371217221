#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>

#include "qlab/characterizers.hpp"
#include "qlab/error.hpp"
#include "qlab/qindep.hpp"
#include "qlab/rng.hpp"
#include "qlab/scenario.hpp"

namespace qlab {

using json::Json;

namespace {

constexpr std::size_t kMaxCount = 1'000'000;

std::uint64_t task_seed(std::uint64_t seed, std::size_t task) {
  return seed + static_cast<std::uint64_t>(task) * 0x9E3779B97F4A7C15ULL;
}

// Runs body(t) for t in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) body(i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < w; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

Distribution random_distribution(const FiniteAbelianGroup& g, Rng& rng) {
  return Distribution(g, rng.simplex(g.size()));
}

// -- remark6 ----------------------------------------------------------------

struct WitnessTally {
  std::size_t joints = 0;
  std::size_t products = 0;
  std::size_t witnesses = 0;
  std::size_t false_witnesses = 0;
  std::size_t missed_products = 0;
  double max_product_defect = 0.0;     // over factorizing joints
  double min_dependent_defect = 1e300;  // over the others
};

JointDistribution remark6_joint(const std::vector<FiniteAbelianGroup>& groups, std::size_t i,
                                Rng& rng) {
  std::vector<Distribution> ms;
  for (const auto& g : groups) ms.push_back(random_distribution(g, rng));
  const JointDistribution product(ms);
  switch (i % 3) {
    case 0:
      return product;
    case 1: {
      std::size_t total = 1;
      for (const auto& g : groups) total *= g.size();
      return JointDistribution(groups, rng.simplex(total));
    }
    default: {
      // Move half of the heavier of two cells onto the other.
      auto p = product.as_distribution().probs();
      if (p.size() < 2) return product;
      auto a = rng.below(p.size());
      auto b = rng.below(p.size() - 1);
      if (b >= a) ++b;
      if (p[b] < p[a]) std::swap(a, b);
      const double eps = 0.5 * p[b];
      p[a] += eps;
      p[b] -= eps;
      return JointDistribution(groups, std::move(p));
    }
  }
}

Report sweep_remark6(const SweepRequest& req, const Tolerances& tol, unsigned workers,
                     Report r) {
  const auto groups = groups_up_to(req.max_order.value_or(12));
  std::vector<std::pair<std::size_t, std::size_t>> tasks;  // (group, arity)
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    for (std::size_t n : {2u, 3u}) tasks.emplace_back(gi, n);
  }
  std::vector<WitnessTally> tallies(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t t) {
    const auto [gi, n] = tasks[t];
    Rng rng(task_seed(req.seed, t));
    const std::vector<FiniteAbelianGroup> gs(n, groups[gi]);
    auto& y = tallies[t];
    for (std::size_t i = 0; i < req.count; ++i) {
      const auto j = remark6_joint(gs, i, rng);
      const double defect = j.independence_defect();
      const bool factorizes = defect <= tol.derived;
      const bool witness = extract_q_witness(j, tol).has_value();
      ++y.joints;
      y.products += factorizes;
      y.witnesses += witness;
      y.false_witnesses += witness && !factorizes;
      y.missed_products += factorizes && !witness;
      if (factorizes) {
        y.max_product_defect = std::max(y.max_product_defect, defect);
      } else {
        y.min_dependent_defect = std::min(y.min_dependent_defect, defect);
      }
    }
  });
  WitnessTally all;
  for (const auto& y : tallies) {
    all.joints += y.joints;
    all.products += y.products;
    all.witnesses += y.witnesses;
    all.false_witnesses += y.false_witnesses;
    all.missed_products += y.missed_products;
    all.max_product_defect = std::max(all.max_product_defect, y.max_product_defect);
    all.min_dependent_defect = std::min(all.min_dependent_defect, y.min_dependent_defect);
  }
  r.artifacts["groups"] = groups.size();
  r.artifacts["arities"] = Json::array({2, 3});
  r.artifacts["joints"] = all.joints;
  r.artifacts["products"] = all.products;
  r.artifacts["witnesses"] = all.witnesses;
  r.artifacts["false_witnesses"] = all.false_witnesses;
  r.artifacts["missed_products"] = all.missed_products;
  r.residuals["max_product_defect"] = all.max_product_defect;
  r.residuals["min_dependent_defect"] =
      all.joints > all.products ? Json(all.min_dependent_defect) : Json(nullptr);
  r.verdict = all.false_witnesses == 0 && all.missed_products == 0 ? "pass" : "fail";
  return r;
}

// -- convolution ------------------------------------------------------------

Report sweep_convolution(const SweepRequest& req, const Tolerances& tol, unsigned workers,
                         Report r) {
  const auto groups = groups_up_to(req.max_order.value_or(16));
  std::vector<double> worst(groups.size(), 0.0);
  parallel_for(groups.size(), workers, [&](std::size_t t) {
    Rng rng(task_seed(req.seed, t));
    for (std::size_t i = 0; i < req.count; ++i) {
      const auto mu = random_distribution(groups[t], rng);
      const auto nu = random_distribution(groups[t], rng);
      const double d =
          max_abs_diff(char_fn(convolve(mu, nu)), multiply(char_fn(mu), char_fn(nu)));
      worst[t] = std::max(worst[t], d);
    }
  });
  const double m = worst.empty() ? 0.0 : *std::max_element(worst.begin(), worst.end());
  r.artifacts["groups"] = groups.size();
  r.artifacts["pairs"] = groups.size() * req.count;
  r.residuals["max_convolution_residual"] = m;
  r.verdict = m < tol.algebraic ? "pass" : "fail";
  return r;
}

// -- fourier ----------------------------------------------------------------

struct FourierTally {
  double round_trip = 0.0;
  double haar = 0.0;
  std::size_t subgroups = 0;
  std::size_t annihilator_failures = 0;
};

// Transform of m_K by direct summation over K.
std::vector<Complex> direct_haar_cf(const Subgroup& k) {
  const auto& g = k.parent();
  std::vector<Complex> out(g.size());
  for (Index y = 0; y < g.size(); ++y) {
    Complex acc = 0.0;
    for (Index x : k.elements()) acc += g.pairing(x, y);
    out[y] = acc / static_cast<double>(k.size());
  }
  return out;
}

Report sweep_fourier(const SweepRequest& req, const Tolerances& tol, unsigned workers,
                     Report r) {
  const auto groups = groups_up_to(req.max_order.value_or(32));
  std::vector<FourierTally> tallies(groups.size());
  parallel_for(groups.size(), workers, [&](std::size_t t) {
    const auto& g = groups[t];
    auto& y = tallies[t];
    Rng rng(task_seed(req.seed, t));
    for (std::size_t i = 0; i < req.count; ++i) {
      const auto mu = random_distribution(g, rng);
      const auto back = inverse_transform(char_fn(mu));
      for (Index x = 0; x < g.size(); ++x) {
        y.round_trip = std::max(y.round_trip, std::abs(back[x] - mu[x]));
      }
    }
    if (req.count == 0) return;
    for (const auto& k : all_subgroups(g)) {
      ++y.subgroups;
      if (!(annihilator(annihilator(k)) == k)) ++y.annihilator_failures;
      const auto fast = haar_cf(k);
      const auto slow = direct_haar_cf(k);
      const auto mk = char_fn(haar(k));
      for (Index v = 0; v < g.size(); ++v) {
        y.haar = std::max({y.haar, std::abs(fast[v] - slow[v]), std::abs(mk[v] - slow[v])});
      }
    }
  });
  FourierTally all;
  for (const auto& y : tallies) {
    all.round_trip = std::max(all.round_trip, y.round_trip);
    all.haar = std::max(all.haar, y.haar);
    all.subgroups += y.subgroups;
    all.annihilator_failures += y.annihilator_failures;
  }
  r.artifacts["groups"] = groups.size();
  r.artifacts["subgroups"] = all.subgroups;
  r.artifacts["annihilator_failures"] = all.annihilator_failures;
  r.residuals["max_round_trip"] = all.round_trip;
  r.residuals["max_haar_cf"] = all.haar;
  r.verdict = all.round_trip < tol.algebraic && all.haar < tol.algebraic &&
                      all.annihilator_failures == 0
                  ? "pass"
                  : "fail";
  return r;
}

// -- heyde-grid -------------------------------------------------------------

struct GridTally {
  std::size_t pairs = 0;
  std::size_t nonvanishing = 0;
  std::size_t symmetric = 0;
  std::size_t symmetric_degenerate = 0;
  std::size_t certified = 0;
  std::size_t disagreements = 0;
  Json offenders = Json::array();
};

bool is_point_mass(const Distribution& d) { return d.support(1e-12).size() == 1; }

double min_modulus(const CharacteristicFunction& f) {
  double m = 1e300;
  for (const auto& z : f.values) m = std::min(m, std::abs(z));
  return m;
}

// max |P(L1, L2) - P(L1, -L2)| with L1 = xi1 + xi2 and L2 = xi1 + alpha xi2,
// computed on the laws themselves.
double probability_symmetry(const JointDistribution& pair, const GroupHom& alpha) {
  const auto& g = alpha.source();
  const auto id = GroupHom::identity(g);
  const auto plus = linear_form_joint(pair, {{id, id}, {id, alpha}});
  const auto minus = linear_form_joint(pair, {{id, id}, {-id, -alpha}});
  return max_abs_diff(plus.as_distribution(), minus.as_distribution());
}

Report sweep_heyde_grid(const SweepRequest& req, const Tolerances& tol, unsigned workers,
                        Report r) {
  const FiniteAbelianGroup g({req.max_order.value_or(5)});
  if (g.size() % 2 == 0) throw SchemaError("max_order", "heyde-grid needs an odd cyclic order");
  const auto alpha = multiplication_map(g, 2);
  if (!alpha.is_automorphism()) throw SchemaError("max_order", "2 must be invertible");
  const auto grid = oracle::rational_grid(g, 6);
  std::vector<CharacteristicFunction> cfs;
  for (const auto& d : grid) cfs.push_back(char_fn(d));
  const std::size_t total = std::min(req.count, grid.size() * grid.size());
  const std::size_t rows = (total + grid.size() - 1) / grid.size();
  std::vector<GridTally> tallies(rows);
  parallel_for(rows, workers, [&](std::size_t a) {
    auto& y = tallies[a];
    const std::size_t end = std::min(total, (a + 1) * grid.size());
    for (std::size_t pi = a * grid.size(); pi < end; ++pi) {
      const std::size_t b = pi % grid.size();
      ++y.pairs;
      if (min_modulus(cfs[a]) < tol.derived || min_modulus(cfs[b]) < tol.derived) continue;
      ++y.nonvanishing;
      const JointDistribution pair({grid[a], grid[b]});
      if (probability_symmetry(pair, alpha) > tol.derived) continue;
      ++y.symmetric;
      const bool degenerate = is_point_mass(grid[a]) && is_point_mass(grid[b]);
      y.symmetric_degenerate += degenerate;
      bool certified = false;
      try {
        const auto v = heyde_conclude({g, grid[a], grid[b], alpha, std::nullopt}, tol);
        certified = v.gaussian && v.trace.certified && v.p_constancy.constant;
      } catch (const Error&) {
      }
      y.certified += certified;
      if (certified != degenerate) {
        ++y.disagreements;
        if (y.offenders.size() < 8) y.offenders.push_back({grid[a].probs(), grid[b].probs()});
      }
    }
  });
  GridTally all;
  for (auto& y : tallies) {
    all.pairs += y.pairs;
    all.nonvanishing += y.nonvanishing;
    all.symmetric += y.symmetric;
    all.symmetric_degenerate += y.symmetric_degenerate;
    all.certified += y.certified;
    all.disagreements += y.disagreements;
    for (auto& o : y.offenders) {
      if (all.offenders.size() < 8) all.offenders.push_back(std::move(o));
    }
  }
  r.artifacts["group"] = g.to_string();
  r.artifacts["grid_size"] = grid.size();
  r.artifacts["pairs"] = all.pairs;
  r.artifacts["nonvanishing"] = all.nonvanishing;
  r.artifacts["symmetric"] = all.symmetric;
  r.artifacts["symmetric_degenerate"] = all.symmetric_degenerate;
  r.artifacts["certified"] = all.certified;
  r.artifacts["disagreements"] = all.disagreements;
  r.artifacts["offenders"] = std::move(all.offenders);
  r.verdict = all.disagreements == 0 && all.symmetric == all.symmetric_degenerate ? "pass"
                                                                                   : "fail";
  return r;
}

}  // namespace

std::vector<FiniteAbelianGroup> groups_up_to(std::int64_t max_order) {
  std::vector<std::vector<std::int64_t>> lists{{}};
  std::function<void(std::vector<std::int64_t>&, std::int64_t, std::int64_t)> extend =
      [&](std::vector<std::int64_t>& cur, std::int64_t bound, std::int64_t room) {
        for (std::int64_t n = 2; n <= std::min(bound, room); ++n) {
          cur.push_back(n);
          lists.push_back(cur);
          extend(cur, n, room / n);
          cur.pop_back();
        }
      };
  std::vector<std::int64_t> cur;
  extend(cur, max_order, max_order);
  const auto size = [](const std::vector<std::int64_t>& l) {
    std::int64_t s = 1;
    for (auto n : l) s *= n;
    return s;
  };
  std::sort(lists.begin(), lists.end(), [&](const auto& a, const auto& b) {
    const auto sa = size(a), sb = size(b);
    return sa != sb ? sa < sb : a > b;
  });
  std::vector<FiniteAbelianGroup> out;
  for (auto& l : lists) out.emplace_back(std::move(l));
  return out;
}

Report run_sweep(const SweepRequest& req, const Tolerances& tol, unsigned workers) {
  if (req.count > kMaxCount) throw SchemaError("count", "count must not exceed 1000000");
  if (req.max_order && (*req.max_order < 1 ||
                        *req.max_order > static_cast<std::int64_t>(FiniteAbelianGroup::kMaxOrder))) {
    throw SchemaError("max_order", "max order must lie in [1, 4096]");
  }
  Report r;
  r.id = "sweep:" + req.kind;
  r.kind = "sweep";
  r.artifacts["seed"] = req.seed;
  r.artifacts["count"] = req.count;
  const auto t0 = std::chrono::steady_clock::now();
  if (req.kind == "remark6") {
    r = sweep_remark6(req, tol, workers, std::move(r));
  } else if (req.kind == "convolution") {
    r = sweep_convolution(req, tol, workers, std::move(r));
  } else if (req.kind == "fourier") {
    r = sweep_fourier(req, tol, workers, std::move(r));
  } else if (req.kind == "heyde-grid") {
    r = sweep_heyde_grid(req, tol, workers, std::move(r));
  } else {
    throw SchemaError("kind", "unknown sweep kind " + req.kind);
  }
  r.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace qlab
