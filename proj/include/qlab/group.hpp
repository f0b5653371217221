#pragma once

// Finite abelian groups written as explicit products Z_{n_1} x ... x Z_{n_k}.
//
// Elements are addressed by a dense index in [0, |G|); the index order is
// lexicographic in the coordinates (first factor most significant), so the
// zero element has index 0. The dual group is identified with G itself
// coordinate-wise through the pairing
//
//   (x, y) = exp(2 pi i * sum_j x_j y_j / n_j).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qlab {

using Index = std::size_t;

struct GroupElement {
  std::vector<std::int64_t> coords;

  bool operator==(const GroupElement&) const = default;
  auto operator<=>(const GroupElement&) const = default;
};

class FiniteAbelianGroup {
 public:
  /// Exhaustive operations are only offered below this cardinality.
  static constexpr std::size_t kMaxOrder = 4096;

  FiniteAbelianGroup() : FiniteAbelianGroup(std::vector<std::int64_t>{}) {}
  explicit FiniteAbelianGroup(std::vector<std::int64_t> orders);

  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::size_t rank() const { return orders_.size(); }
  std::size_t size() const { return size_; }
  /// Least common multiple of the factor orders.
  std::int64_t exponent() const { return exponent_; }

  Index zero() const { return 0; }
  /// Validates the coordinates; throws InvalidElement when out of range.
  Index index_of(const GroupElement& x) const;
  /// Reduces arbitrary integer coordinates modulo the factor orders.
  Index index_of_reduced(std::span<const std::int64_t> coords) const;
  GroupElement element(Index i) const;
  std::int64_t coord(Index i, std::size_t axis) const {
    return coords_[i * rank() + axis];
  }

  Index add(Index a, Index b) const;
  Index sub(Index a, Index b) const;
  Index neg(Index a) const;
  Index scale(Index a, std::int64_t n) const;
  std::int64_t element_order(Index a) const;

  /// (x, y) = exp(2 pi i * pairing_phase(x, y) / exponent()).
  std::int64_t pairing_phase(Index x, Index y) const;
  std::complex<double> pairing(Index x, Index y) const;

  /// Cartesian product; the factors of `other` follow ours.
  FiniteAbelianGroup product(const FiniteAbelianGroup& other) const;
  FiniteAbelianGroup power(std::size_t n) const;

  std::string to_string() const;
  std::string element_string(Index i) const;

  bool operator==(const FiniteAbelianGroup& other) const {
    return orders_ == other.orders_;
  }

 private:
  std::vector<std::int64_t> orders_;
  std::vector<std::size_t> strides_;
  std::vector<std::int64_t> coords_;  // row-major |G| x rank
  std::vector<std::int64_t> phase_weight_;  // exponent / n_j
  std::size_t size_ = 1;
  std::int64_t exponent_ = 1;
};

/// exp(2 pi i k / n) with k reduced into [0, n).
std::complex<double> root_of_unity(std::int64_t k, std::int64_t n);

std::complex<double> pairing(const FiniteAbelianGroup& g, const GroupElement& x,
                             const GroupElement& y);

class Subgroup {
 public:
  /// Validates membership, the zero element and closure.
  Subgroup(FiniteAbelianGroup parent, std::vector<Index> elements);

  static Subgroup generated_by(const FiniteAbelianGroup& g,
                               std::span<const Index> generators);
  static Subgroup trivial(const FiniteAbelianGroup& g);
  static Subgroup whole(const FiniteAbelianGroup& g);

  const FiniteAbelianGroup& parent() const { return parent_; }
  /// Sorted element indices.
  const std::vector<Index>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(Index x) const;

  bool operator==(const Subgroup& other) const {
    return parent_ == other.parent_ && elements_ == other.elements_;
  }

 private:
  struct Unchecked {};
  Subgroup(Unchecked, FiniteAbelianGroup parent, std::vector<Index> elements)
      : parent_(std::move(parent)), elements_(std::move(elements)) {}
  friend class GroupHom;

  FiniteAbelianGroup parent_;
  std::vector<Index> elements_;
};

/// Every subgroup of `g`, ordered by size and then by element list.
std::vector<Subgroup> all_subgroups(const FiniteAbelianGroup& g);

/// A(Y, K) = {y : (x, y) = 1 for all x in K}, as a subgroup of the dual
/// (identified with the same product group).
Subgroup annihilator(const Subgroup& k);

class GroupHom {
 public:
  /// Validates totality and additivity exhaustively.
  GroupHom(FiniteAbelianGroup source, FiniteAbelianGroup target,
           std::vector<Index> table);

  /// x -> sum_j x_j * column_j, with matrix[i][j] the i-th target
  /// coordinate of the image of the j-th source generator.
  static GroupHom from_matrix(const FiniteAbelianGroup& source,
                              const FiniteAbelianGroup& target,
                              const std::vector<std::vector<std::int64_t>>& matrix);
  static GroupHom identity(const FiniteAbelianGroup& g);
  static GroupHom multiplication(const FiniteAbelianGroup& g, std::int64_t n);

  const FiniteAbelianGroup& source() const { return source_; }
  const FiniteAbelianGroup& target() const { return target_; }
  const std::vector<Index>& table() const { return table_; }
  Index operator()(Index x) const { return table_[x]; }

  bool is_injective() const;
  bool is_surjective() const;
  bool is_bijective() const { return is_injective() && is_surjective(); }
  bool is_endomorphism() const { return source_ == target_; }
  bool is_automorphism() const { return is_endomorphism() && is_bijective(); }

  /// (*this) o inner.
  GroupHom compose(const GroupHom& inner) const;
  GroupHom operator+(const GroupHom& other) const;
  GroupHom operator-(const GroupHom& other) const;
  GroupHom operator-() const;
  /// Throws NotAnAutomorphism unless bijective.
  GroupHom inverse() const;

  Subgroup kernel() const;
  Subgroup image() const;

  bool operator==(const GroupHom& other) const {
    return source_ == other.source_ && target_ == other.target_ &&
           table_ == other.table_;
  }

 private:
  struct Unchecked {};
  GroupHom(Unchecked, FiniteAbelianGroup source, FiniteAbelianGroup target,
           std::vector<Index> table)
      : source_(std::move(source)),
        target_(std::move(target)),
        table_(std::move(table)) {}

  FiniteAbelianGroup source_;
  FiniteAbelianGroup target_;
  std::vector<Index> table_;
};

/// f_n : x -> n x.
GroupHom multiplication_map(const FiniteAbelianGroup& g, std::int64_t n);

/// Dual map target^ -> source^ defined by (x, h^ y) = (h x, y).
GroupHom dual_hom(const GroupHom& h);

/// Adjoint of an automorphism; throws NotAnAutomorphism otherwise.
GroupHom adjoint(const GroupHom& alpha);

bool is_corwin(const FiniteAbelianGroup& g);
bool is_corwin(const Subgroup& k);

struct StructuralPredicates {
  bool has_order_two_elements = false;
  bool unique_division_by_2 = false;
};
StructuralPredicates structural_predicates(const FiniteAbelianGroup& g);

/// Elements whose order is a power of the prime p.
Subgroup primary_component(const FiniteAbelianGroup& g, std::int64_t p);

struct Quotient {
  FiniteAbelianGroup group;
  GroupHom projection;
};
Quotient quotient(const FiniteAbelianGroup& g, const Subgroup& k);

bool is_prime(std::int64_t p);

}  // namespace qlab
