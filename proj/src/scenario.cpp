#include "qlab/scenario.hpp"

#include <atomic>
#include <chrono>
#include <set>
#include <thread>

#include "qlab/characterizers.hpp"
#include "qlab/elimination.hpp"
#include "qlab/error.hpp"
#include "qlab/qindep.hpp"
#include "qlab/rng.hpp"

namespace qlab {

using json::Json;

namespace {

const std::set<std::string> kKinds = {"group-inspect", "q-witness", "sd",        "heyde",
                                      "kb",            "cramer",    "lemma3",    "heyde-chain",
                                      "remark7"};
const std::set<std::string> kVerdicts = {"pass", "fail", "hypothesis-violated",
                                         "counterexample"};

Json error_json(const std::string& kind, const std::string& message) {
  return {{"kind", kind}, {"message", message}};
}

// Wraps a checker body with error classification and timing.
Job wrap(Scenario s, std::function<void(Report&)> body) {
  return [s = std::move(s), body = std::move(body)] {
    Report r;
    r.id = s.id;
    r.kind = s.kind;
    r.expected = s.expect;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(r);
    } catch (const HypothesisViolated& e) {
      r.verdict = "hypothesis-violated";
      r.error = error_json(e.kind(), e.what());
    } catch (const ConstructionRejected& e) {
      r.verdict = "hypothesis-violated";
      r.error = error_json(e.kind(), e.what());
    } catch (const PremiseViolated& e) {
      r.verdict = "hypothesis-violated";
      r.error = error_json(e.kind(), e.what());
    } catch (const Error& e) {
      r.verdict = "fail";
      r.error = error_json(e.kind(), e.what());
    } catch (const std::exception& e) {
      r.verdict = "fail";
      r.error = error_json("internal", e.what());
    }
    r.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  };
}

double horner(const std::vector<double>& c, std::int64_t y) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * static_cast<double>(y) + *it;
  return v;
}

WindowFunction window_poly(const std::vector<double>& c, std::int64_t radius) {
  return WindowFunction::sample(radius, 1, [&](std::span<const std::int64_t> y) {
    return Complex{horner(c, y[0]), 0.0};
  });
}

int get_l(const Json& p, const std::string& path) {
  const auto l = json::get_int(json::field(p, "l", path), path + ".l");
  if (l < 0 || l > 16) throw SchemaError(path + ".l", "l must lie in [0, 16]");
  return static_cast<int>(l);
}

std::int64_t get_radius(const Json& p, const std::string& path, std::int64_t lo,
                        std::int64_t hi) {
  const auto r = json::get_int(json::field(p, "radius", path), path + ".radius");
  if (r < lo || r > hi) {
    throw SchemaError(path + ".radius",
                      "radius must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return r;
}

const Json& list_field(const Json& p, const std::string& key, const std::string& path) {
  const auto& v = json::field(p, key, path);
  if (!v.is_array() || v.empty()) throw SchemaError(path + "." + key, "expected a nonempty list");
  return v;
}

std::vector<CharacteristicFunction> cfs_of(const std::vector<Distribution>& ds) {
  std::vector<CharacteristicFunction> out;
  for (const auto& d : ds) out.push_back(char_fn(d));
  return out;
}

Json factors_json(const std::vector<DegeneracyCheck>& fs, const FiniteAbelianGroup& g) {
  Json out = Json::array();
  for (const auto& f : fs) out.push_back(json::encode(f, g));
  return out;
}

// -- group-inspect ----------------------------------------------------------

Job prepare_group_inspect(const Scenario& s, const std::string& path) {
  const auto g = json::parse_group(json::has(s.payload, "group") ? s.payload["group"] : s.payload,
                                   json::has(s.payload, "group") ? path + ".group" : path);
  return wrap(s, [g](Report& r) {
    const auto pred = structural_predicates(g);
    r.artifacts["group"] = g.to_string();
    r.artifacts["order"] = g.size();
    r.artifacts["exponent"] = g.exponent();
    r.artifacts["corwin"] = is_corwin(g);
    r.artifacts["has_order_two_elements"] = pred.has_order_two_elements;
    r.artifacts["unique_division_by_2"] = pred.unique_division_by_2;
    bool round_trip = true;
    if (g.size() <= 256) {
      const auto subs = all_subgroups(g);
      r.artifacts["subgroups"] = subs.size();
      for (const auto& k : subs) round_trip = round_trip && annihilator(annihilator(k)) == k;
      r.artifacts["annihilator_round_trip"] = round_trip;
    }
    r.verdict = round_trip ? "pass" : "fail";
  });
}

// -- q-witness --------------------------------------------------------------

Job prepare_q_witness(const Scenario& s, const std::string& path, const Tolerances& tol) {
  const auto& p = s.payload;
  if (json::has(p, "circle")) {
    const std::string cp = path + ".circle";
    const auto& c = p["circle"];
    const auto phi1 = json::parse_even_polynomial(json::field(c, "phi1", cp), cp + ".phi1");
    const auto phi2 = json::parse_even_polynomial(json::field(c, "phi2", cp), cp + ".phi2");
    const auto radius = get_radius(c, cp, 1, 32);
    return wrap(s, [phi1, phi2, radius, tol](Report& r) {
      const auto g1 = CircleDistribution::from_spectrum({0.0, phi1, false}, "phi1");
      const auto g2 = CircleDistribution::from_spectrum({0.0, phi2, false}, "phi2");
      const auto joint = sum_difference_joint(g1, g2, radius);
      const auto expected = remark5_q(phi1, phi2);
      const auto w = extract_q_witness(joint, 8, tol);
      const auto defect = product_defect(joint);
      r.artifacts["expected_witness"] = json::encode(expected);
      r.residuals["product_defect_relative"] = defect.relative;
      if (!w) {
        r.artifacts["witness"] = nullptr;
        r.verdict = "fail";
        return;
      }
      const double err = w->real.max_coefficient_diff(expected);
      r.artifacts["witness"] = json::encode(w->real.pruned(tol.window_poly));
      r.residuals["witness_residual"] = w->residual;
      r.residuals["witness_log_residual"] = w->log_residual;
      r.residuals["coefficient_error"] = err;
      r.verdict = err < tol.window_poly && w->imag.pruned(tol.window_poly).is_zero() ? "pass"
                                                                                      : "fail";
    });
  }
  const auto& gl = list_field(p, "groups", path);
  std::vector<FiniteAbelianGroup> groups;
  std::size_t total = 1;
  for (std::size_t i = 0; i < gl.size(); ++i) {
    groups.push_back(json::parse_group(gl[i], path + ".groups[" + std::to_string(i) + "]"));
    total *= groups.back().size();
    if (total > FiniteAbelianGroup::kMaxOrder) {
      throw SchemaError(path + ".groups", "product group exceeds the size cap");
    }
  }
  std::optional<JointDistribution> joint;
  if (json::has(p, "joint")) {
    const auto& jp = p["joint"];
    if (!jp.is_array() || jp.size() != total) {
      throw SchemaError(path + ".joint", "expected " + std::to_string(total) + " probabilities");
    }
    std::vector<double> probs;
    for (std::size_t i = 0; i < jp.size(); ++i) {
      probs.push_back(json::get_number(jp[i], path + ".joint[" + std::to_string(i) + "]"));
    }
    try {
      joint.emplace(groups, probs);
    } catch (const Error& e) {
      throw SchemaError(path + ".joint", e.what());
    }
  } else if (json::has(p, "marginals")) {
    const auto& mp = p["marginals"];
    if (!mp.is_array() || mp.size() != groups.size()) {
      throw SchemaError(path + ".marginals", "expected one distribution per group");
    }
    std::vector<Distribution> ms;
    for (std::size_t i = 0; i < mp.size(); ++i) {
      ms.push_back(json::parse_distribution(mp[i], groups[i],
                                            path + ".marginals[" + std::to_string(i) + "]"));
    }
    joint.emplace(ms);
  } else if (json::has(p, "random")) {
    Rng rng(s.seed);
    joint.emplace(groups, rng.simplex(total));
  } else {
    throw SchemaError(path, "expected joint, marginals or random");
  }
  return wrap(s, [j = *joint, tol](Report& r) {
    const auto w = extract_q_witness(j, tol);
    const double defect = j.independence_defect();
    const bool factorizes = defect <= tol.derived;
    r.residuals["independence_defect"] = defect;
    r.artifacts["factorizes"] = factorizes;
    r.artifacts["witness_found"] = w.has_value();
    if (w) {
      r.residuals["witness_residual"] = w->residual;
      r.artifacts["witness"] = "0";
    }
    r.verdict = w.has_value() == factorizes ? "pass" : "fail";
  });
}

// -- sd ---------------------------------------------------------------------

Job prepare_sd(const Scenario& s, const std::string& path, const Tolerances& tol) {
  const auto& p = s.payload;
  const auto g = json::parse_group(json::field(p, "group", path), path + ".group");
  const auto& dl = list_field(p, "distributions", path);
  const auto& al = list_field(p, "alpha", path);
  const auto& bl = list_field(p, "beta", path);
  if (al.size() != dl.size() || bl.size() != dl.size()) {
    throw SchemaError(path, "alpha, beta and distributions must have equal lengths");
  }
  SDInstance inst{g, {}, {}, {}, std::nullopt};
  std::vector<Distribution> ds;
  for (std::size_t j = 0; j < dl.size(); ++j) {
    const auto idx = "[" + std::to_string(j) + "]";
    ds.push_back(json::parse_distribution(dl[j], g, path + ".distributions" + idx));
    auto a = json::parse_endomorphism(al[j], g, path + ".alpha" + idx);
    auto b = json::parse_endomorphism(bl[j], g, path + ".beta" + idx);
    if (!a.is_automorphism()) throw SchemaError(path + ".alpha" + idx, "not an automorphism");
    if (!b.is_automorphism()) throw SchemaError(path + ".beta" + idx, "not an automorphism");
    inst.alpha.push_back(std::move(a));
    inst.beta.push_back(std::move(b));
  }
  inst.mu = cfs_of(ds);
  return wrap(s, [inst, tol](Report& r) {
    r.residuals["equation"] = sd_equation_residual(inst);
    const auto v = sd_conclude(inst, tol);
    r.artifacts["b_classes"] = v.classes;
    r.artifacts["p_constancy"] = json::encode(v.p_constancy);
    r.artifacts["factors"] = factors_json(v.factors, inst.group);
    r.artifacts["trace"] = json::encode(v.trace);
    r.residuals["elimination_final"] = v.trace.final_residual;
    r.verdict = v.gaussian ? "pass" : "fail";
  });
}

// -- heyde ------------------------------------------------------------------

Distribution parse_heyde_law(const Json& j, const FiniteAbelianGroup& g,
                             const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() != "nondegenerate") {
      throw SchemaError(path, "the only named law is \"nondegenerate\"");
    }
    try {
      return nondegenerate_law(g);
    } catch (const Error& e) {
      throw SchemaError(path, e.what());
    }
  }
  return json::parse_distribution(j, g, path);
}

Job prepare_heyde(const Scenario& s, const std::string& path, const Tolerances& tol) {
  const auto& p = s.payload;
  const auto g = json::parse_group(json::field(p, "group", path), path + ".group");
  const auto xi1 = parse_heyde_law(json::field(p, "xi1", path), g, path + ".xi1");
  const bool iid = json::has(p, "iid") && p["iid"].is_boolean() && p["iid"].get<bool>();
  const auto xi2 = iid ? xi1 : parse_heyde_law(json::field(p, "xi2", path), g, path + ".xi2");
  auto alpha = json::parse_endomorphism(json::field(p, "alpha", path), g, path + ".alpha");
  if (!alpha.is_automorphism()) throw SchemaError(path + ".alpha", "not an automorphism");
  HeydeInstance inst{g, xi1, xi2, alpha, std::nullopt};
  return wrap(s, [inst, tol](Report& r) {
    r.residuals["symmetry"] = heyde_symmetry_residual(inst);
    r.artifacts["condition"] = heyde_condition(inst.alpha);
    try {
      const auto v = heyde_conclude(inst, tol);
      r.residuals["witness"] = v.witness_residual;
      r.residuals["doubled"] = v.doubled_residual;
      r.residuals["elimination_final"] = v.trace.final_residual;
      r.artifacts["p_constancy"] = json::encode(v.p_constancy);
      r.artifacts["factors"] = factors_json(v.factors, inst.group);
      r.artifacts["trace"] = json::encode(v.trace);
      r.verdict = v.gaussian ? "pass" : "fail";
    } catch (const ConditionViolated& e) {
      const auto c = heyde_counterexample(inst, tol);
      r.error = error_json(e.kind(), e.what());
      r.artifacts["certificate"] = {
          {"kernel_element", json::encode_element(inst.group, c.kernel_element)},
          {"minus_identity", c.minus_identity},
          {"symmetry_residual", c.symmetry_residual},
          {"factors", factors_json(c.factors, inst.group)},
          {"certified", c.certified}};
      r.verdict = c.certified ? "counterexample" : "hypothesis-violated";
    }
  });
}

// -- kb ---------------------------------------------------------------------

Job prepare_kb(const Scenario& s, const std::string& path, const Tolerances& tol) {
  const auto& p = s.payload;
  const auto g = json::parse_group(json::field(p, "group", path), path + ".group");
  const auto mu1 = json::parse_distribution(json::field(p, "mu1", path), g, path + ".mu1");
  const auto mu2 = json::parse_distribution(json::field(p, "mu2", path), g, path + ".mu2");
  KBInstance inst{g, char_fn(mu1), char_fn(mu2), std::nullopt};
  return wrap(s, [inst, tol](Report& r) {
    r.residuals["equation"] = kb_equation_residual(inst);
    const auto d = kb_doubling_check(inst);
    r.residuals["doubling_first"] = d.first;
    r.residuals["doubling_second"] = d.second;
    r.residuals["doubling_iterated"] = d.iterated;
    const auto f = kb_factorize(inst, tol);
    r.residuals["reconstruction"] = f.reconstruction_residual;
    r.artifacts["n"] = json::encode(f.n);
    r.artifacts["w"] = json::encode(f.w);
    r.artifacts["corwin"] = f.corwin;
    r.artifacts["x1"] = json::encode_element(inst.group, f.x1);
    r.artifacts["x2"] = json::encode_element(inst.group, f.x2);
    r.artifacts["shift_relation"] =
        f.shift_relation ? json::encode_element(inst.group, *f.shift_relation) : Json(nullptr);
    r.verdict = "pass";
  });
}

// -- cramer -----------------------------------------------------------------

Job prepare_cramer(const Scenario& s, const std::string& path, const Tolerances& tol) {
  const auto& p = s.payload;
  if (json::has(p, "circle")) {
    const std::string cp = path + ".circle";
    const auto& c = p["circle"];
    const auto gamma = json::parse_spectrum(json::field(c, "gamma", cp), cp + ".gamma");
    const auto mu1 = json::parse_spectrum(json::field(c, "mu1", cp), cp + ".mu1");
    const auto mu2 = json::parse_spectrum(json::field(c, "mu2", cp), cp + ".mu2");
    const auto radius = json::has(c, "radius") ? get_radius(c, cp, 2, 64) : 8;
    return wrap(s, [gamma, mu1, mu2, radius, tol](Report& r) {
      const auto v = cramer_check(gamma, mu1, mu2, Polynomial(2), radius, tol);
      r.residuals["identity"] = v.identity_residual;
      r.artifacts["gamma"] = json::encode(v.gamma);
      r.artifacts["factors"] = Json::array({json::encode(v.factors[0]), json::encode(v.factors[1])});
      r.verdict = v.gaussian ? "pass" : "fail";
    });
  }
  const auto g = json::parse_group(json::field(p, "group", path), path + ".group");
  const auto mu1 = json::parse_distribution(json::field(p, "mu1", path), g, path + ".mu1");
  const auto mu2 = json::parse_distribution(json::field(p, "mu2", path), g, path + ".mu2");
  const auto gamma = json::has(p, "gamma")
                         ? json::parse_distribution(p["gamma"], g, path + ".gamma")
                         : convolve(mu1, mu2);
  return wrap(s, [g, gc = char_fn(gamma), c1 = char_fn(mu1), c2 = char_fn(mu2), tol](Report& r) {
    const auto v = cramer_check(gc, c1, c2, std::nullopt, tol);
    r.residuals["identity"] = v.identity_residual;
    r.artifacts["gamma"] = json::encode(v.gamma, g);
    r.artifacts["factors"] = factors_json(v.factors, g);
    r.verdict = v.gaussian ? "pass" : "fail";
  });
}

// -- lemma3 / heyde-chain ---------------------------------------------------

EliminationOptions engine_options(const Json& p, const std::string& path,
                                  const Tolerances& tol) {
  EliminationOptions opt;
  opt.tol = tol;
  if (json::has(p, "strict_premise")) {
    if (!p["strict_premise"].is_boolean()) {
      throw SchemaError(path + ".strict_premise", "expected a boolean");
    }
    opt.strict_premise = p["strict_premise"].get<bool>();
  }
  return opt;
}

double get_perturbation(const Json& p, const std::string& path) {
  if (!json::has(p, "perturb")) return 0.0;
  const double a = json::get_number(p["perturb"], path + ".perturb");
  if (!(a >= 0.0 && a <= 1.0)) throw SchemaError(path + ".perturb", "must lie in [0, 1]");
  return a;
}

void trace_report(Report& r, const EliminationTrace& t, std::optional<int> independent) {
  r.residuals["premise"] = t.premise_residual;
  r.residuals["r_repeated"] = t.r_repeated_residual;
  r.residuals["r_chain"] = t.r_chain_residual;
  r.residuals["final"] = t.final_residual;
  r.artifacts["certified"] = t.certified;
  r.artifacts["degree_bound"] = t.degree_bound;
  r.artifacts["degree"] = t.degree ? Json(*t.degree) : Json(nullptr);
  r.artifacts["independent_degree"] = independent ? Json(*independent) : Json(nullptr);
  r.artifacts["trace"] = json::encode(t);
  const bool confirmed = independent && *independent <= t.degree_bound;
  r.verdict = t.certified && confirmed ? "pass" : "fail";
}

Job prepare_lemma3(const Scenario& s, const std::string& path, const Tolerances& tol) {
  const auto& p = s.payload;
  const int l = get_l(p, path);
  const auto opt = engine_options(p, path, tol);
  const double noise = get_perturbation(p, path);
  const auto& psi_json = list_field(p, "psi", path);
  const auto& b_json = list_field(p, "b", path);
  if (psi_json.size() != b_json.size()) throw SchemaError(path + ".b", "one b_j per psi_j");
  const std::uint64_t seed = s.seed;

  if (json::has(p, "window")) {
    const auto radius = get_radius(p["window"], path + ".window", 1, 64);
    std::vector<int> b;
    std::vector<std::vector<double>> psi;
    for (std::size_t j = 0; j < psi_json.size(); ++j) {
      const auto idx = "[" + std::to_string(j) + "]";
      const auto bj = json::get_int(b_json[j], path + ".b" + idx);
      if (bj != 1 && bj != -1) throw SchemaError(path + ".b" + idx, "must be +1 or -1");
      b.push_back(static_cast<int>(bj));
      psi.push_back(json::parse_coefficients(psi_json[j], path + ".psi" + idx));
    }
    return wrap(s, [=](Report& r) {
      std::vector<WindowFunction> pw;
      for (const auto& c : psi) pw.push_back(window_poly(c, 2 * radius));
      const auto lhs_of = [&](const std::vector<WindowFunction>& f, std::int64_t u,
                              std::int64_t v) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j) acc += f[j].at(Point{u + b[j] * v});
        return acc;
      };
      const auto r2 = WindowFunction::sample(radius, 2, [&](std::span<const std::int64_t> x) {
        return lhs_of(pw, x[0], x[1]) - lhs_of(pw, x[0], 0) - lhs_of(pw, 0, x[1]) +
               lhs_of(pw, 0, 0);
      });
      if (noise > 0.0) {
        Rng rng(seed);
        for (auto& z : pw[0].values) z += noise * (2.0 * rng.uniform() - 1.0);
      }
      const auto pp = WindowFunction::sample(
          radius, 1, [&](std::span<const std::int64_t> x) { return lhs_of(pw, x[0], 0); });
      const auto qq = WindowFunction::sample(radius, 1, [&](std::span<const std::int64_t> x) {
        return lhs_of(pw, 0, x[0]) - lhs_of(pw, 0, 0);
      });
      WindowShiftProblem prob{radius, pw, b, pp, qq, r2, l};
      const auto t = run_lemma3(prob, opt);
      if (const auto bad = validate_trace(t, prob)) throw NumericalInconsistency(*bad);
      std::optional<int> independent;
      try {
        if (const auto c = min_degree(pp, t.degree_bound, tol.window_poly)) independent = c->degree;
      } catch (const WindowExhausted&) {
      }
      trace_report(r, t, independent);
    });
  }

  const auto g = json::parse_group(json::field(p, "group", path), path + ".group");
  std::vector<GroupHom> b;
  std::vector<FiniteFunction> psi;
  for (std::size_t j = 0; j < psi_json.size(); ++j) {
    const auto idx = "[" + std::to_string(j) + "]";
    b.push_back(json::parse_endomorphism(b_json[j], g, path + ".b" + idx));
    psi.push_back(json::parse_table(psi_json[j], g, path + ".psi" + idx));
  }
  return wrap(s, [=](Report& r) {
    auto ps = psi;
    const auto lhs_of = [&](const std::vector<FiniteFunction>& f, Index u, Index v) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < f.size(); ++j) acc += f[j][g.add(u, b[j](v))];
      return acc;
    };
    const auto g2 = g.product(g);
    const auto r2 = FiniteFunction::sample(g2, [&](Index x) {
      const Index u = x / g.size(), v = x % g.size();
      return lhs_of(ps, u, v) - lhs_of(ps, u, 0) - lhs_of(ps, 0, v) + lhs_of(ps, 0, 0);
    });
    if (noise > 0.0) {
      Rng rng(seed);
      for (auto& z : ps[0].values) z += noise * (2.0 * rng.uniform() - 1.0);
    }
    const auto pp = FiniteFunction::sample(g, [&](Index u) { return lhs_of(ps, u, 0); });
    const auto qq = FiniteFunction::sample(
        g, [&](Index v) { return lhs_of(ps, 0, v) - lhs_of(ps, 0, 0); });
    FiniteShiftProblem prob{g, ps, b, pp, qq, r2, l};
    const auto t = run_lemma3(prob, opt);
    if (const auto bad = validate_trace(t, prob)) throw NumericalInconsistency(*bad);
    std::optional<int> independent;
    if (const auto c = min_degree(pp, t.degree_bound, tol.finite_poly)) independent = c->degree;
    trace_report(r, t, independent);
  });
}

Job prepare_heyde_chain(const Scenario& s, const std::string& path, const Tolerances& tol) {
  const auto& p = s.payload;
  const int l = get_l(p, path);
  const auto opt = engine_options(p, path, tol);
  const double noise = get_perturbation(p, path);
  const std::uint64_t seed = s.seed;

  if (json::has(p, "window")) {
    const auto radius = get_radius(p["window"], path + ".window", 1, 32);
    const auto c1 = json::parse_coefficients(json::field(p, "psi1", path), path + ".psi1");
    const auto c2 = json::parse_coefficients(json::field(p, "psi2", path), path + ".psi2");
    return wrap(s, [=](Report& r) {
      auto w1 = window_poly(c1, 4 * radius);
      const auto w2 = window_poly(c2, 4 * radius);
      // b = 1: LHS = psi1(2u + 2v) + psi2(2u + 2v), P(y) = Q(y) = psi1(2y) + psi2(2y).
      const auto lhs = [&](const WindowFunction& f1, std::int64_t u, std::int64_t v) {
        return f1.at(Point{2 * u + 2 * v}) + w2.at(Point{2 * u + 2 * v});
      };
      const auto r2 = WindowFunction::sample(radius, 2, [&](std::span<const std::int64_t> x) {
        return lhs(w1, x[0], x[1]) - lhs(w1, x[0], 0) - lhs(w1, 0, x[1]);
      });
      if (noise > 0.0) {
        Rng rng(seed);
        for (auto& z : w1.values) z += noise * (2.0 * rng.uniform() - 1.0);
      }
      WindowHeydeProblem prob{radius, w1, w2, 1, r2, l, std::nullopt, std::nullopt};
      const auto t = run_heyde_chain(prob, opt);
      const auto pp = WindowFunction::sample(
          2 * radius, 1, [&](std::span<const std::int64_t> x) { return lhs(w1, x[0], 0); });
      std::optional<int> independent;
      try {
        if (const auto c = min_degree(pp, t.degree_bound, tol.window_poly)) independent = c->degree;
      } catch (const WindowExhausted&) {
      }
      trace_report(r, t, independent);
    });
  }

  const auto g = json::parse_group(json::field(p, "group", path), path + ".group");
  const auto b = json::parse_endomorphism(json::field(p, "b", path), g, path + ".b");
  const auto psi1 = json::parse_table(json::field(p, "psi1", path), g, path + ".psi1");
  const auto psi2 = json::parse_table(json::field(p, "psi2", path), g, path + ".psi2");
  return wrap(s, [=](Report& r) {
    auto f1 = psi1;
    const auto ib = GroupHom::identity(g) + b;
    const auto lhs = [&](const FiniteFunction& a, Index u, Index v) {
      return a[g.add(ib(u), g.scale(v, 2))] + psi2[g.add(g.scale(b(u), 2), ib(v))];
    };
    const auto [p0, q0] = heyde_pq(g, f1, psi2, b);
    const auto r2 = FiniteFunction::sample(g.product(g), [&](Index x) {
      const Index u = x / g.size(), v = x % g.size();
      return lhs(f1, u, v) - p0[u] - q0[v];
    });
    if (noise > 0.0) {
      Rng rng(seed);
      for (auto& z : f1.values) z += noise * (2.0 * rng.uniform() - 1.0);
    }
    FiniteHeydeProblem prob{g, f1, psi2, b, r2, l, std::nullopt, std::nullopt};
    const auto t = run_heyde_chain(prob, opt);
    const auto pp = heyde_pq(g, f1, psi2, b).first;
    std::optional<int> independent;
    if (const auto c = min_degree(pp, t.degree_bound, tol.finite_poly)) independent = c->degree;
    trace_report(r, t, independent);
  });
}

// -- remark7 ----------------------------------------------------------------

Job prepare_remark7(const Scenario& s, const std::string& path, const Tolerances& tol) {
  const auto& p = s.payload;
  const auto phi = json::parse_even_polynomial(json::field(p, "phi", path), path + ".phi");
  const auto radius = json::has(p, "radius") ? get_radius(p, path, 1, 32) : 6;
  return wrap(s, [phi, radius, tol](Report& r) {
    r.artifacts["phi"] = json::encode(phi);
    std::optional<SummableConstruction> c;
    try {
      c.emplace(remark7_construct(phi));
    } catch (const ConstructionRejected&) {
      if (phi.leading() > 0.0) r.residuals["spectral_sum"] = spectral_sum(phi).sum;
      throw;
    }
    r.residuals["spectral_sum"] = c->sum;
    r.residuals["density_min"] = c->density.min;
    r.residuals["density_integral"] = c->density.integral;
    r.artifacts["truncation"] = c->distribution.truncation();
    const auto joint = sum_difference_joint(c->distribution, c->distribution, radius);
    const auto expected = remark5_q(phi, phi);
    const auto w = extract_q_witness(joint, 8, tol);
    const auto defect = product_defect(joint);
    r.artifacts["expected_witness"] = json::encode(expected);
    r.residuals["product_defect_relative"] = defect.relative;
    r.residuals["product_defect_absolute"] = defect.absolute;
    r.artifacts["product_defect_at"] = defect.at_relative;
    bool ok = c->density.min > 0.0 && defect.relative > 0.1;
    if (w) {
      const auto q = w->real.pruned(tol.window_poly);
      const double err = w->real.max_coefficient_diff(expected);
      r.artifacts["witness"] = json::encode(q);
      r.residuals["witness_coefficient_error"] = err;
      r.residuals["witness_log_residual"] = w->log_residual;
      const std::vector<std::int64_t> one{1, 1};
      r.artifacts["q_at_1_1"] = q.at(one);
      ok = ok && err < tol.window_poly;
    } else {
      r.artifacts["witness"] = nullptr;
      ok = false;
    }
    r.verdict = ok ? "pass" : "fail";
  });
}

}  // namespace

// ---------------------------------------------------------------------------

Json Report::to_json(bool timing) const {
  Json out{{"id", id}, {"kind", kind}, {"verdict", verdict}, {"expected", expected},
           {"residuals", residuals}, {"artifacts", artifacts}};
  if (error) out["error"] = *error;
  if (timing) out["runtime_seconds"] = runtime_seconds;
  return out;
}

std::vector<Scenario> parse_scenarios(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  const auto schema = json::get_string(json::field(doc, "schema", "$"), "$.schema");
  if (schema != kScenarioSchema) {
    throw SchemaError("$.schema", "expected \"" + std::string(kScenarioSchema) + "\"");
  }
  const auto& list = json::field(doc, "scenarios", "$");
  if (!list.is_array()) throw SchemaError("$.scenarios", "expected a list");
  std::vector<Scenario> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "$.scenarios[" + std::to_string(i) + "]";
    const auto& e = list[i];
    Scenario s;
    s.id = json::get_string(json::field(e, "id", path), path + ".id");
    if (!ids.insert(s.id).second) throw SchemaError(path + ".id", "duplicate id");
    s.kind = json::get_string(json::field(e, "kind", path), path + ".kind");
    if (!kKinds.count(s.kind)) throw SchemaError(path + ".kind", "unknown kind " + s.kind);
    if (json::has(e, "seed")) {
      const auto& sd = e["seed"];
      if (!sd.is_number_unsigned() && !(sd.is_number_integer() && sd.get<std::int64_t>() >= 0)) {
        throw SchemaError(path + ".seed", "expected a nonnegative integer");
      }
      s.seed = sd.get<std::uint64_t>();
    }
    if (json::has(e, "expect")) {
      s.expect = json::get_string(e["expect"], path + ".expect");
      if (!kVerdicts.count(s.expect)) throw SchemaError(path + ".expect", "unknown verdict");
    }
    s.payload = json::field(e, "payload", path);
    if (!s.payload.is_object()) throw SchemaError(path + ".payload", "expected an object");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Job> prepare(const std::vector<Scenario>& scenarios, const Tolerances& tol) {
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& s = scenarios[i];
    const std::string path = "$.scenarios[" + std::to_string(i) + "].payload";
    if (s.kind == "group-inspect") {
      jobs.push_back(prepare_group_inspect(s, path));
    } else if (s.kind == "q-witness") {
      jobs.push_back(prepare_q_witness(s, path, tol));
    } else if (s.kind == "sd") {
      jobs.push_back(prepare_sd(s, path, tol));
    } else if (s.kind == "heyde") {
      jobs.push_back(prepare_heyde(s, path, tol));
    } else if (s.kind == "kb") {
      jobs.push_back(prepare_kb(s, path, tol));
    } else if (s.kind == "cramer") {
      jobs.push_back(prepare_cramer(s, path, tol));
    } else if (s.kind == "lemma3") {
      jobs.push_back(prepare_lemma3(s, path, tol));
    } else if (s.kind == "heyde-chain") {
      jobs.push_back(prepare_heyde_chain(s, path, tol));
    } else if (s.kind == "remark7") {
      jobs.push_back(prepare_remark7(s, path, tol));
    }
  }
  return jobs;
}

std::vector<Report> run_jobs(const std::vector<Job>& jobs, unsigned workers) {
  std::vector<Report> out(jobs.size());
  const unsigned n = std::max(1u, std::min<unsigned>(workers, jobs.size()));
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) out[i] = jobs[i]();
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

Json report_document(const std::vector<Report>& reports, bool timing) {
  Json list = Json::array();
  std::size_t unexpected = 0;
  for (const auto& r : reports) {
    list.push_back(r.to_json(timing));
    if (!r.as_expected()) ++unexpected;
  }
  return {{"schema", kReportSchema},
          {"reports", std::move(list)},
          {"summary", {{"count", reports.size()}, {"unexpected", unexpected}}}};
}

int exit_code(const std::vector<Report>& reports) {
  for (const auto& r : reports) {
    if (!r.as_expected()) return 1;
  }
  return 0;
}

}  // namespace qlab
