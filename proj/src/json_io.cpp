#include "qlab/json_io.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "qlab/error.hpp"

namespace qlab::json {

// -- encoding ---------------------------------------------------------------

Json encode(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) {
    terms.push_back({{"exponent", e}, {"coefficient", c}});
  }
  return {{"text", p.to_string()}, {"terms", std::move(terms)}};
}

Json encode(const EvenPolynomial& p) {
  Json coeffs = Json::object();
  for (const auto& [k, c] : p.coeffs) coeffs[std::to_string(k)] = c;
  return {{"text", p.to_string()}, {"even_coeffs", std::move(coeffs)}};
}

Json encode_element(const FiniteAbelianGroup& g, Index x) { return g.element(x).coords; }

Json encode(const Subgroup& s) {
  Json elems = Json::array();
  for (Index x : s.elements()) elems.push_back(encode_element(s.parent(), x));
  return {{"order", s.size()}, {"elements", std::move(elems)}};
}

Json encode(const EliminationTrace& t) {
  Json samples = Json::array();
  for (const auto& s : t.samples) {
    Json steps = Json::array();
    for (const auto& st : s.steps) {
      Json step{{"shift", Json::array({st.s, st.t})}, {"realizes", st.realizes}};
      if (!st.psi_shifts.empty()) step["psi_shifts"] = st.psi_shifts;
      steps.push_back(std::move(step));
    }
    samples.push_back(
        {{"h", s.h}, {"k", s.k}, {"p_residual", s.p_residual}, {"steps", std::move(steps)}});
  }
  Json out{{"mode", t.mode},
           {"operator", t.final_operator},
           {"order", t.order},
           {"premise_ok", t.premise_ok},
           {"certified", t.certified},
           {"degree_bound", t.degree_bound},
           {"degree", t.degree ? Json(*t.degree) : Json(nullptr)},
           {"residuals",
            {{"premise", t.premise_residual},
             {"r_repeated", t.r_repeated_residual},
             {"r_chain", t.r_chain_residual},
             {"lhs", t.lhs_residual},
             {"final", t.final_residual}}}};
  if (t.required_radius > 0) out["required_radius"] = t.required_radius;
  out["samples"] = std::move(samples);
  return out;
}

Json encode(const DegeneracyCheck& d, const FiniteAbelianGroup& g) {
  return {{"degenerate", d.degenerate},
          {"defect", d.defect},
          {"location", d.location ? encode_element(g, *d.location) : Json(nullptr)}};
}

Json encode(const GaussianFitT& f) {
  return {{"gaussian", f.gaussian},
          {"shift", f.shift},
          {"sigma", f.sigma},
          {"quadratic_residual", f.quadratic_residual},
          {"quadratic_at", Json::array({f.quadratic_at_u, f.quadratic_at_v})},
          {"phase_residual", f.phase_residual}};
}

Json encode(const ConstancyVerdict& c) {
  return {{"constant", c.constant},
          {"polynomial", c.polynomial},
          {"degree", c.degree},
          {"depth", c.depth},
          {"residual", c.residual}};
}

// -- parsing ----------------------------------------------------------------

bool has(const Json& j, const std::string& key) { return j.is_object() && j.contains(key); }

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key, "missing field");
  return *it;
}

std::int64_t get_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<std::int64_t>();
}

double get_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

namespace {

std::vector<std::int64_t> int_list(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected a list of integers");
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_int(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
}

}  // namespace

FiniteAbelianGroup parse_group(const Json& j, const std::string& path) {
  const bool wrapped = j.is_object();
  const std::string p = wrapped ? path + ".orders" : path;
  const auto orders = int_list(wrapped ? field(j, "orders", path) : j, p);
  std::int64_t size = 1;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] < 1) {
      throw SchemaError(p + "[" + std::to_string(i) + "]", "orders must be >= 1");
    }
    size *= orders[i];
    if (size > static_cast<std::int64_t>(FiniteAbelianGroup::kMaxOrder)) {
      throw SchemaError(p, "group order exceeds the cap of " +
                               std::to_string(FiniteAbelianGroup::kMaxOrder));
    }
  }
  return guarded(p, [&] { return FiniteAbelianGroup(orders); });
}

Index parse_element(const Json& j, const FiniteAbelianGroup& g, const std::string& path) {
  const auto coords = int_list(j, path);
  return guarded(path, [&] { return g.index_of(GroupElement{coords}); });
}

Distribution parse_distribution(const Json& j, const FiniteAbelianGroup& g,
                                const std::string& path) {
  if (j.is_array()) {
    if (j.size() != g.size()) {
      throw SchemaError(path, "expected " + std::to_string(g.size()) + " probabilities");
    }
    std::vector<double> p;
    for (std::size_t i = 0; i < j.size(); ++i) {
      p.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return guarded(path, [&] { return Distribution(g, std::move(p)); });
  }
  if (has(j, "point")) {
    return Distribution::degenerate(g, parse_element(j["point"], g, path + ".point"));
  }
  if (has(j, "uniform")) return Distribution::uniform(g);
  if (has(j, "haar")) {
    const auto& h = j["haar"];
    const std::string hp = path + ".haar";
    const auto& gens = field(h, "generators", hp);
    if (!gens.is_array()) throw SchemaError(hp + ".generators", "expected a list");
    std::vector<Index> idx;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      idx.push_back(parse_element(gens[i], g, hp + ".generators[" + std::to_string(i) + "]"));
    }
    const Index shift = has(h, "shift") ? parse_element(h["shift"], g, hp + ".shift") : 0;
    return convolve(Distribution::degenerate(g, shift),
                    haar(Subgroup::generated_by(g, idx)));
  }
  throw SchemaError(path, "expected probabilities, point, uniform or haar");
}

GroupHom parse_endomorphism(const Json& j, const FiniteAbelianGroup& g,
                            const std::string& path) {
  if (j.is_number_integer()) return multiplication_map(g, j.get<std::int64_t>());
  if (!j.is_array()) throw SchemaError(path, "expected an integer or a matrix");
  std::vector<std::vector<std::int64_t>> m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    m.push_back(int_list(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return guarded(path, [&] { return GroupHom::from_matrix(g, g, m); });
}

EvenPolynomial parse_even_polynomial(const Json& j, const std::string& path) {
  const auto& c = field(j, "even_coeffs", path);
  const std::string cp = path + ".even_coeffs";
  if (!c.is_object()) throw SchemaError(cp, "expected an object of power: coefficient");
  EvenPolynomial out;
  for (const auto& [key, value] : c.items()) {
    int power = 0;
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), power);
    if (ec != std::errc() || ptr != key.data() + key.size() || power < 2 || power % 2) {
      throw SchemaError(cp + "." + key, "powers must be even integers >= 2");
    }
    const double a = get_number(value, cp + "." + key);
    if (a != 0.0) out.coeffs[power] = a;
  }
  return out;
}

CircleSpectrum parse_spectrum(const Json& j, const std::string& path) {
  if (has(j, "haar")) return CircleSpectrum::haar_measure();
  CircleSpectrum s;
  s.phi = parse_even_polynomial(j, path);
  if (has(j, "shift")) {
    const double x = get_number(j["shift"], path + ".shift");
    const double two_pi = 2.0 * std::numbers::pi;
    s.shift = x - two_pi * std::floor(x / two_pi);
  }
  return s;
}

std::vector<double> parse_coefficients(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected a coefficient list");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

FiniteFunction parse_table(const Json& j, const FiniteAbelianGroup& g,
                           const std::string& path) {
  const auto c = parse_coefficients(j, path);
  if (c.size() != g.size()) {
    throw SchemaError(path, "expected " + std::to_string(g.size()) + " values");
  }
  return FiniteFunction::sample(g, [&](Index y) { return Complex{c[y], 0.0}; });
}

}  // namespace qlab::json
