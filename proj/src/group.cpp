#include "qlab/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "qlab/error.hpp"

namespace qlab {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

std::complex<double> root_of_unity(std::int64_t k, std::int64_t n) {
  k = mod(k, n);
  if (k == 0) return {1.0, 0.0};
  // Exact values on the axes keep pairings such as exp(2 pi i / 4) = i exact.
  if (4 * k == n) return {0.0, 1.0};
  if (2 * k == n) return {-1.0, 0.0};
  if (4 * k == 3 * n) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

// ---------------------------------------------------------------------------
// FiniteAbelianGroup

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::int64_t> orders)
    : orders_(std::move(orders)) {
  for (auto n : orders_) {
    if (n < 1) {
      throw InvalidArgument("cyclic factor orders must be >= 1, got " +
                            std::to_string(n));
    }
    size_ *= static_cast<std::size_t>(n);
    if (size_ > kMaxOrder) {
      throw GroupTooLarge("group order exceeds the cap of " +
                          std::to_string(kMaxOrder) + " elements");
    }
    exponent_ = std::lcm(exponent_, n);
  }
  const std::size_t k = orders_.size();
  strides_.assign(k, 1);
  for (std::size_t j = k; j-- > 1;) {
    strides_[j - 1] = strides_[j] * static_cast<std::size_t>(orders_[j]);
  }
  phase_weight_.resize(k);
  for (std::size_t j = 0; j < k; ++j) phase_weight_[j] = exponent_ / orders_[j];
  coords_.resize(size_ * k);
  for (Index i = 0; i < size_; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      coords_[i * k + j] = static_cast<std::int64_t>(
          (i / strides_[j]) % static_cast<std::size_t>(orders_[j]));
    }
  }
}

Index FiniteAbelianGroup::index_of(const GroupElement& x) const {
  if (x.coords.size() != rank()) {
    throw InvalidElement("element has " + std::to_string(x.coords.size()) +
                         " coordinates, group " + to_string() + " has rank " +
                         std::to_string(rank()));
  }
  Index idx = 0;
  for (std::size_t j = 0; j < rank(); ++j) {
    if (x.coords[j] < 0 || x.coords[j] >= orders_[j]) {
      throw InvalidElement("coordinate " + std::to_string(j) + " = " +
                           std::to_string(x.coords[j]) +
                           " is outside [0, " + std::to_string(orders_[j]) +
                           ")");
    }
    idx += static_cast<Index>(x.coords[j]) * strides_[j];
  }
  return idx;
}

Index FiniteAbelianGroup::index_of_reduced(
    std::span<const std::int64_t> coords) const {
  if (coords.size() != rank()) {
    throw InvalidElement("coordinate count does not match group rank");
  }
  Index idx = 0;
  for (std::size_t j = 0; j < rank(); ++j) {
    idx += static_cast<Index>(mod(coords[j], orders_[j])) * strides_[j];
  }
  return idx;
}

GroupElement FiniteAbelianGroup::element(Index i) const {
  GroupElement e;
  e.coords.assign(coords_.begin() + static_cast<std::ptrdiff_t>(i * rank()),
                  coords_.begin() + static_cast<std::ptrdiff_t>((i + 1) * rank()));
  return e;
}

Index FiniteAbelianGroup::add(Index a, Index b) const {
  Index idx = 0;
  for (std::size_t j = 0; j < rank(); ++j) {
    std::int64_t c = coord(a, j) + coord(b, j);
    if (c >= orders_[j]) c -= orders_[j];
    idx += static_cast<Index>(c) * strides_[j];
  }
  return idx;
}

Index FiniteAbelianGroup::sub(Index a, Index b) const {
  Index idx = 0;
  for (std::size_t j = 0; j < rank(); ++j) {
    std::int64_t c = coord(a, j) - coord(b, j);
    if (c < 0) c += orders_[j];
    idx += static_cast<Index>(c) * strides_[j];
  }
  return idx;
}

Index FiniteAbelianGroup::neg(Index a) const { return sub(0, a); }

Index FiniteAbelianGroup::scale(Index a, std::int64_t n) const {
  Index idx = 0;
  for (std::size_t j = 0; j < rank(); ++j) {
    const std::int64_t c = mod(mod(n, orders_[j]) * coord(a, j), orders_[j]);
    idx += static_cast<Index>(c) * strides_[j];
  }
  return idx;
}

std::int64_t FiniteAbelianGroup::element_order(Index a) const {
  std::int64_t order = 1;
  for (std::size_t j = 0; j < rank(); ++j) {
    order = std::lcm(order, orders_[j] / std::gcd(coord(a, j), orders_[j]));
  }
  return order;
}

std::int64_t FiniteAbelianGroup::pairing_phase(Index x, Index y) const {
  std::int64_t phase = 0;
  for (std::size_t j = 0; j < rank(); ++j) {
    phase = (phase + coord(x, j) * coord(y, j) % orders_[j] * phase_weight_[j]) %
            exponent_;
  }
  return phase;
}

std::complex<double> FiniteAbelianGroup::pairing(Index x, Index y) const {
  return root_of_unity(pairing_phase(x, y), exponent_);
}

FiniteAbelianGroup FiniteAbelianGroup::product(
    const FiniteAbelianGroup& other) const {
  std::vector<std::int64_t> orders = orders_;
  orders.insert(orders.end(), other.orders_.begin(), other.orders_.end());
  return FiniteAbelianGroup(std::move(orders));
}

FiniteAbelianGroup FiniteAbelianGroup::power(std::size_t n) const {
  std::vector<std::int64_t> orders;
  for (std::size_t i = 0; i < n; ++i) {
    orders.insert(orders.end(), orders_.begin(), orders_.end());
  }
  return FiniteAbelianGroup(std::move(orders));
}

std::string FiniteAbelianGroup::to_string() const {
  if (orders_.empty()) return "Z_1";
  std::ostringstream os;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    if (j) os << "x";
    os << "Z_" << orders_[j];
  }
  return os.str();
}

std::string FiniteAbelianGroup::element_string(Index i) const {
  std::ostringstream os;
  os << "(";
  for (std::size_t j = 0; j < rank(); ++j) {
    if (j) os << ",";
    os << coord(i, j);
  }
  os << ")";
  return os.str();
}

std::complex<double> pairing(const FiniteAbelianGroup& g, const GroupElement& x,
                             const GroupElement& y) {
  return g.pairing(g.index_of(x), g.index_of(y));
}

// ---------------------------------------------------------------------------
// Subgroup

Subgroup::Subgroup(FiniteAbelianGroup parent, std::vector<Index> elements)
    : parent_(std::move(parent)), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()),
                  elements_.end());
  for (Index x : elements_) {
    if (x >= parent_.size()) {
      throw InvalidSubgroup("element index " + std::to_string(x) +
                            " is outside the parent group");
    }
  }
  if (elements_.empty() || elements_.front() != 0) {
    throw InvalidSubgroup("subgroup must contain the zero element");
  }
  for (Index a : elements_) {
    if (!contains(parent_.neg(a))) {
      throw InvalidSubgroup("not closed under negation at " +
                            parent_.element_string(a));
    }
    for (Index b : elements_) {
      if (!contains(parent_.add(a, b))) {
        throw InvalidSubgroup("not closed under addition: " +
                              parent_.element_string(a) + " + " +
                              parent_.element_string(b));
      }
    }
  }
}

Subgroup Subgroup::generated_by(const FiniteAbelianGroup& g,
                                std::span<const Index> generators) {
  std::vector<char> in(g.size(), 0);
  std::vector<Index> members{0};
  in[0] = 1;
  for (Index gen : generators) {
    if (gen >= g.size()) {
      throw InvalidElement("generator index outside the group");
    }
    // Close the current span under adding multiples of the new generator.
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Index next = g.add(members[i], gen);
      if (!in[next]) {
        in[next] = 1;
        members.push_back(next);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return Subgroup(Unchecked{}, g, std::move(members));
}

Subgroup Subgroup::trivial(const FiniteAbelianGroup& g) {
  return Subgroup(Unchecked{}, g, {0});
}

Subgroup Subgroup::whole(const FiniteAbelianGroup& g) {
  std::vector<Index> all(g.size());
  std::iota(all.begin(), all.end(), Index{0});
  return Subgroup(Unchecked{}, g, std::move(all));
}

bool Subgroup::contains(Index x) const {
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

std::vector<Subgroup> all_subgroups(const FiniteAbelianGroup& g) {
  std::set<std::vector<Index>> seen;
  std::vector<std::vector<Index>> frontier{{0}};
  seen.insert({0});
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    const auto current = frontier[i];
    std::vector<char> in(g.size(), 0);
    for (Index x : current) in[x] = 1;
    for (Index x = 0; x < g.size(); ++x) {
      if (in[x]) continue;
      std::vector<Index> gens = current;
      gens.push_back(x);
      auto span = Subgroup::generated_by(g, gens).elements();
      if (seen.insert(span).second) frontier.push_back(std::move(span));
    }
  }
  std::vector<Subgroup> out;
  out.reserve(seen.size());
  for (const auto& s : seen) out.push_back(Subgroup::generated_by(g, s));
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.elements() < b.elements();
  });
  return out;
}

Subgroup annihilator(const Subgroup& k) {
  const auto& g = k.parent();
  std::vector<Index> out;
  for (Index y = 0; y < g.size(); ++y) {
    bool kills = true;
    for (Index x : k.elements()) {
      if (g.pairing_phase(x, y) != 0) {
        kills = false;
        break;
      }
    }
    if (kills) out.push_back(y);
  }
  return Subgroup(g, std::move(out));
}

// ---------------------------------------------------------------------------
// GroupHom

GroupHom::GroupHom(FiniteAbelianGroup source, FiniteAbelianGroup target,
                   std::vector<Index> table)
    : source_(std::move(source)),
      target_(std::move(target)),
      table_(std::move(table)) {
  if (table_.size() != source_.size()) {
    throw InvalidHomomorphism("table has " + std::to_string(table_.size()) +
                              " entries, source has " +
                              std::to_string(source_.size()) + " elements");
  }
  for (Index v : table_) {
    if (v >= target_.size()) {
      throw InvalidHomomorphism("table entry outside the target group");
    }
  }
  for (Index a = 0; a < source_.size(); ++a) {
    for (Index b = a; b < source_.size(); ++b) {
      if (table_[source_.add(a, b)] != target_.add(table_[a], table_[b])) {
        throw InvalidHomomorphism(
            "map is not additive at " + source_.element_string(a) + ", " +
            source_.element_string(b));
      }
    }
  }
}

GroupHom GroupHom::from_matrix(
    const FiniteAbelianGroup& source, const FiniteAbelianGroup& target,
    const std::vector<std::vector<std::int64_t>>& matrix) {
  if (matrix.size() != target.rank()) {
    throw InvalidHomomorphism("matrix needs one row per target factor");
  }
  for (const auto& row : matrix) {
    if (row.size() != source.rank()) {
      throw InvalidHomomorphism("matrix needs one column per source factor");
    }
  }
  std::vector<Index> table(source.size());
  std::vector<std::int64_t> image(target.rank());
  for (Index x = 0; x < source.size(); ++x) {
    for (std::size_t i = 0; i < target.rank(); ++i) {
      std::int64_t acc = 0;
      for (std::size_t j = 0; j < source.rank(); ++j) {
        acc = mod(acc + mod(matrix[i][j], target.orders()[i]) *
                            source.coord(x, j),
                  target.orders()[i]);
      }
      image[i] = acc;
    }
    table[x] = target.index_of_reduced(image);
  }
  // Re-validated: the columns must respect the source factor orders.
  return GroupHom(source, target, std::move(table));
}

GroupHom GroupHom::identity(const FiniteAbelianGroup& g) {
  std::vector<Index> table(g.size());
  std::iota(table.begin(), table.end(), Index{0});
  return GroupHom(Unchecked{}, g, g, std::move(table));
}

GroupHom GroupHom::multiplication(const FiniteAbelianGroup& g, std::int64_t n) {
  std::vector<Index> table(g.size());
  for (Index x = 0; x < g.size(); ++x) table[x] = g.scale(x, n);
  return GroupHom(Unchecked{}, g, g, std::move(table));
}

bool GroupHom::is_injective() const { return kernel().size() == 1; }

bool GroupHom::is_surjective() const {
  return image().size() == target_.size();
}

GroupHom GroupHom::compose(const GroupHom& inner) const {
  if (!(inner.target_ == source_)) {
    throw GroupMismatch("cannot compose: inner target " +
                        inner.target_.to_string() + " != outer source " +
                        source_.to_string());
  }
  std::vector<Index> table(inner.source_.size());
  for (Index x = 0; x < table.size(); ++x) table[x] = table_[inner.table_[x]];
  return GroupHom(Unchecked{}, inner.source_, target_, std::move(table));
}

GroupHom GroupHom::operator+(const GroupHom& other) const {
  if (!(source_ == other.source_ && target_ == other.target_)) {
    throw GroupMismatch("cannot add homomorphisms with different signatures");
  }
  std::vector<Index> table(table_.size());
  for (Index x = 0; x < table.size(); ++x) {
    table[x] = target_.add(table_[x], other.table_[x]);
  }
  return GroupHom(Unchecked{}, source_, target_, std::move(table));
}

GroupHom GroupHom::operator-() const {
  std::vector<Index> table(table_.size());
  for (Index x = 0; x < table.size(); ++x) table[x] = target_.neg(table_[x]);
  return GroupHom(Unchecked{}, source_, target_, std::move(table));
}

GroupHom GroupHom::operator-(const GroupHom& other) const {
  return *this + (-other);
}

GroupHom GroupHom::inverse() const {
  if (!is_bijective() || !(source_.size() == target_.size())) {
    throw NotAnAutomorphism("homomorphism is not bijective");
  }
  std::vector<Index> table(table_.size());
  for (Index x = 0; x < table_.size(); ++x) table[table_[x]] = x;
  return GroupHom(Unchecked{}, target_, source_, std::move(table));
}

Subgroup GroupHom::kernel() const {
  std::vector<Index> out;
  for (Index x = 0; x < table_.size(); ++x) {
    if (table_[x] == 0) out.push_back(x);
  }
  return Subgroup(Subgroup::Unchecked{}, source_, std::move(out));
}

Subgroup GroupHom::image() const {
  std::vector<Index> out = table_;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return Subgroup(Subgroup::Unchecked{}, target_, std::move(out));
}

GroupHom multiplication_map(const FiniteAbelianGroup& g, std::int64_t n) {
  return GroupHom::multiplication(g, n);
}

GroupHom dual_hom(const GroupHom& h) {
  const auto& src = h.source();
  const auto& tgt = h.target();
  // The character x -> (h x, y) is determined by its values on the unit
  // vectors e_j of the source: (h e_j, y) = exp(2 pi i P_j / L) with
  // L = exp(tgt). Since n_j e_j = 0, P_j is a multiple of L / n_j and the
  // j-th coordinate of the dual image is P_j / (L / n_j).
  std::vector<Index> unit_images(src.rank());
  for (std::size_t j = 0; j < src.rank(); ++j) {
    std::vector<std::int64_t> e(src.rank(), 0);
    e[j] = 1;
    unit_images[j] = h(src.index_of_reduced(e));
  }
  const std::int64_t big_l = tgt.exponent();
  std::vector<Index> table(tgt.size());
  std::vector<std::int64_t> coords(src.rank());
  for (Index y = 0; y < tgt.size(); ++y) {
    for (std::size_t j = 0; j < src.rank(); ++j) {
      const std::int64_t phase = tgt.pairing_phase(unit_images[j], y);
      const std::int64_t n_j = src.orders()[j];
      // phase / L = c / n_j  <=>  c = phase * n_j / L.
      const std::int64_t num = phase * n_j;
      if (num % big_l != 0) {
        throw NumericalInconsistency("dual image is not a character of the source");
      }
      coords[j] = num / big_l;
    }
    table[y] = src.index_of_reduced(coords);
  }
  return GroupHom(tgt, src, std::move(table));
}

GroupHom adjoint(const GroupHom& alpha) {
  if (!alpha.is_automorphism()) {
    throw NotAnAutomorphism("adjoint requires a bijective endomorphism");
  }
  return dual_hom(alpha);
}

bool is_corwin(const FiniteAbelianGroup& g) {
  return multiplication_map(g, 2).is_surjective();
}

bool is_corwin(const Subgroup& k) {
  const auto& g = k.parent();
  std::vector<Index> doubled;
  doubled.reserve(k.size());
  for (Index x : k.elements()) doubled.push_back(g.scale(x, 2));
  std::sort(doubled.begin(), doubled.end());
  doubled.erase(std::unique(doubled.begin(), doubled.end()), doubled.end());
  return doubled == k.elements();
}

StructuralPredicates structural_predicates(const FiniteAbelianGroup& g) {
  const auto f2 = multiplication_map(g, 2);
  StructuralPredicates p;
  p.has_order_two_elements = f2.kernel().size() > 1;
  p.unique_division_by_2 = f2.is_bijective();
  return p;
}

Subgroup primary_component(const FiniteAbelianGroup& g, std::int64_t p) {
  if (!is_prime(p)) {
    throw InvalidArgument(std::to_string(p) + " is not prime");
  }
  std::vector<Index> out;
  for (Index x = 0; x < g.size(); ++x) {
    std::int64_t order = g.element_order(x);
    while (order % p == 0) order /= p;
    if (order == 1) out.push_back(x);
  }
  return Subgroup(g, std::move(out));
}

Quotient quotient(const FiniteAbelianGroup& g, const Subgroup& k) {
  if (!(k.parent() == g)) {
    throw InvalidSubgroup("subgroup belongs to " + k.parent().to_string() +
                          ", not " + g.to_string());
  }
  if (k.size() == 1) return {g, GroupHom::identity(g)};

  // Relation lattice: rows n_j e_j plus a generating set of K.
  const std::size_t r = g.rank();
  std::vector<Index> gens;
  {
    std::vector<char> in(g.size(), 0);
    in[0] = 1;
    for (Index x : k.elements()) {
      if (in[x]) continue;
      gens.push_back(x);
      const auto span = Subgroup::generated_by(g, gens);
      for (Index y : span.elements()) in[y] = 1;
    }
  }
  using Matrix = std::vector<std::vector<std::int64_t>>;
  Matrix a;
  for (std::size_t j = 0; j < r; ++j) {
    std::vector<std::int64_t> row(r, 0);
    row[j] = g.orders()[j];
    a.push_back(row);
  }
  for (Index x : gens) {
    std::vector<std::int64_t> row(r);
    for (std::size_t j = 0; j < r; ++j) row[j] = g.coord(x, j);
    a.push_back(row);
  }
  Matrix q(r, std::vector<std::int64_t>(r, 0));
  for (std::size_t j = 0; j < r; ++j) q[j][j] = 1;

  // Diagonalize A by unimodular row and column operations; column operations
  // are mirrored in Q so that x -> x Q carries rowspace(A) onto the diagonal.
  const std::size_t rows = a.size();
  for (std::size_t t = 0; t < r; ++t) {
    for (;;) {
      std::size_t pi = rows, pj = r;
      std::int64_t best = 0;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < r; ++j) {
          const std::int64_t v = std::abs(a[i][j]);
          if (v != 0 && (best == 0 || v < best)) {
            best = v;
            pi = i;
            pj = j;
          }
        }
      }
      if (best == 0) break;
      std::swap(a[t], a[pi]);
      for (auto& row : a) std::swap(row[t], row[pj]);
      for (auto& row : q) std::swap(row[t], row[pj]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const std::int64_t f = a[i][t] / a[t][t];
        if (f != 0) {
          for (std::size_t j = t; j < r; ++j) a[i][j] -= f * a[t][j];
        }
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < r; ++j) {
        const std::int64_t f = a[t][j] / a[t][t];
        if (f != 0) {
          for (std::size_t i = 0; i < rows; ++i) a[i][j] -= f * a[i][t];
          for (std::size_t i = 0; i < r; ++i) q[i][j] -= f * q[i][t];
        }
        if (a[t][j] != 0) clean = false;
      }
      if (clean) break;
    }
  }

  std::vector<std::int64_t> orders;
  std::vector<std::size_t> kept;
  for (std::size_t t = 0; t < r; ++t) {
    const std::int64_t d = std::abs(a[t][t]);
    if (d == 0) {
      throw NumericalInconsistency("relation lattice lost full rank");
    }
    if (d > 1) {
      orders.push_back(d);
      kept.push_back(t);
    }
  }
  FiniteAbelianGroup target(orders);
  std::vector<Index> table(g.size());
  std::vector<std::int64_t> coords(kept.size());
  for (Index x = 0; x < g.size(); ++x) {
    for (std::size_t c = 0; c < kept.size(); ++c) {
      std::int64_t acc = 0;
      for (std::size_t j = 0; j < r; ++j) {
        acc = mod(acc + mod(g.coord(x, j) * q[j][kept[c]], orders[c]), orders[c]);
      }
      coords[c] = acc;
    }
    table[x] = target.index_of_reduced(coords);
  }
  GroupHom projection(g, target, std::move(table));
  if (!(projection.kernel() == k) || !projection.is_surjective()) {
    throw NumericalInconsistency("quotient projection has the wrong kernel");
  }
  return {std::move(target), std::move(projection)};
}

}  // namespace qlab
