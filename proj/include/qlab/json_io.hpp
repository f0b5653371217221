#pragma once

// JSON encoding of library objects and payload parsers. Parsers throw
// SchemaError carrying the path of the offending field.

#include <string>
#include <vector>

#include <json.hpp>

#include "qlab/characterizers.hpp"
#include "qlab/circle.hpp"
#include "qlab/elimination.hpp"
#include "qlab/group.hpp"
#include "qlab/measures.hpp"
#include "qlab/polynomial.hpp"

namespace qlab::json {

using Json = nlohmann::ordered_json;

// -- encoding ---------------------------------------------------------------

Json encode(const Polynomial& p);
Json encode(const EvenPolynomial& p);
Json encode_element(const FiniteAbelianGroup& g, Index x);
Json encode(const Subgroup& s);
Json encode(const EliminationTrace& t);
Json encode(const DegeneracyCheck& d, const FiniteAbelianGroup& g);
Json encode(const GaussianFitT& f);
Json encode(const ConstancyVerdict& c);

// -- parsing ----------------------------------------------------------------

/// Reads `key` of object `j`; `path` names `j`.
const Json& field(const Json& j, const std::string& key, const std::string& path);
bool has(const Json& j, const std::string& key);

std::int64_t get_int(const Json& j, const std::string& path);
double get_number(const Json& j, const std::string& path);
std::string get_string(const Json& j, const std::string& path);

/// {"orders": [n_1, ...]} or a bare list of orders.
FiniteAbelianGroup parse_group(const Json& j, const std::string& path);
Index parse_element(const Json& j, const FiniteAbelianGroup& g, const std::string& path);
/// A list of probabilities, {"point": [coords]}, {"uniform": true} or
/// {"haar": {"generators": [[...]], "shift": [...]}}.
Distribution parse_distribution(const Json& j, const FiniteAbelianGroup& g,
                                const std::string& path);
/// An integer n (multiplication by n) or a matrix (rows = target coordinates).
GroupHom parse_endomorphism(const Json& j, const FiniteAbelianGroup& g,
                            const std::string& path);
/// {"even_coeffs": {"2": a, "4": b}}.
EvenPolynomial parse_even_polynomial(const Json& j, const std::string& path);
/// {"shift": x, "even_coeffs": {...}} or {"haar": true}.
CircleSpectrum parse_spectrum(const Json& j, const std::string& path);
/// Coefficient list [c_0, c_1, ...] of a polynomial in one variable.
std::vector<double> parse_coefficients(const Json& j, const std::string& path);
/// A list of |G| real numbers.
FiniteFunction parse_table(const Json& j, const FiniteAbelianGroup& g,
                           const std::string& path);

}  // namespace qlab::json
