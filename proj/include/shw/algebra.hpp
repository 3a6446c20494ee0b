#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shw {

/// Elements are dense indices 0..n-1 into the algebra's universe.
using Elem = int;

/// Dense row-major n x n operation table.
class BinaryTable {
 public:
  BinaryTable() = default;
  BinaryTable(std::size_t n, std::vector<Elem> cells);
  static BinaryTable from_rows(const std::vector<std::vector<Elem>>& rows);

  std::size_t size() const noexcept { return n_; }
  Elem operator()(Elem x, Elem y) const noexcept { return cells_[static_cast<std::size_t>(x) * n_ + y]; }
  std::span<const Elem> cells() const noexcept { return cells_; }
  std::vector<std::vector<Elem>> rows() const;

  friend bool operator==(const BinaryTable&, const BinaryTable&) = default;
  friend auto operator<=>(const BinaryTable&, const BinaryTable&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Elem> cells_;
};

enum class OpName { Join, Meet, Arrow, Neg, Star, Plus, DoublePrime };

std::string_view op_name(OpName op);
std::size_t op_arity(OpName op);

/// A finite algebra in the signature <v, ^, ->, ', 0, 1>.
///
/// The lattice reduct is always present. The arrow and the unary ' are
/// optional so that lattice skeletons and the base semi-Heyting algebras can
/// be represented; requesting an absent operation raises SignatureError.
/// Construction checks only structural well-formedness; lattice laws are
/// checked by validate_lattice().
class FiniteAlgebra {
 public:
  FiniteAlgebra(std::string name, std::vector<std::string> labels, BinaryTable join,
                BinaryTable meet, std::optional<BinaryTable> arrow,
                std::optional<std::vector<Elem>> neg, Elem bot, Elem top);

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(Elem x) const { return labels_.at(static_cast<std::size_t>(x)); }
  std::optional<Elem> find(std::string_view label) const;
  /// Like find(), but raises InputError for an unknown label.
  Elem index_of(std::string_view label) const;

  Elem bot() const noexcept { return bot_; }
  Elem top() const noexcept { return top_; }
  bool has_arrow() const noexcept { return arrow_.has_value(); }
  bool has_neg() const noexcept { return neg_.has_value(); }

  const BinaryTable& join_table() const noexcept { return join_; }
  const BinaryTable& meet_table() const noexcept { return meet_; }
  const std::optional<BinaryTable>& arrow_table() const noexcept { return arrow_; }
  const std::optional<std::vector<Elem>>& neg_table() const noexcept { return neg_; }

  // Unchecked lookups. Callers verify the signature up front.
  Elem join(Elem x, Elem y) const noexcept { return join_(x, y); }
  Elem meet(Elem x, Elem y) const noexcept { return meet_(x, y); }
  Elem arrow(Elem x, Elem y) const noexcept { return (*arrow_)(x, y); }
  Elem neg(Elem x) const noexcept { return (*neg_)[static_cast<std::size_t>(x)]; }
  bool leq(Elem x, Elem y) const noexcept { return meet_(x, y) == x; }

  // Derived operations.
  Elem star(Elem x) const noexcept { return arrow(x, bot_); }
  Elem plus(Elem x) const noexcept { return neg(star(neg(x))); }
  Elem dprime(Elem x) const noexcept { return neg(neg(x)); }
  /// k-fold application of x |-> (x')*.
  Elem iter_prime_star(Elem x, int k) const noexcept;

  void require_arrow() const;
  void require_neg() const;

  FiniteAlgebra renamed(std::string name) const;
  FiniteAlgebra with_arrow(BinaryTable arrow) const;
  FiniteAlgebra with_neg(std::vector<Elem> neg) const;
  /// Copy with arrow and ' removed.
  FiniteAlgebra lattice_reduct() const;

  /// Same tables and constants; names and labels are ignored.
  bool same_tables(const FiniteAlgebra& other) const;
  friend bool operator==(const FiniteAlgebra&, const FiniteAlgebra&) = default;

 private:
  std::string name_;
  std::vector<std::string> labels_;
  BinaryTable join_;
  BinaryTable meet_;
  std::optional<BinaryTable> arrow_;
  std::optional<std::vector<Elem>> neg_;
  Elem bot_ = 0;
  Elem top_ = 0;
};

/// One failed lattice law together with the assignment that breaks it.
struct LawFailure {
  std::string law;
  std::vector<Elem> witness;
};

struct ValidationReport {
  std::vector<LawFailure> failures;
  bool ok() const noexcept { return failures.empty(); }
};

/// Checks the bounded distributive lattice laws exhaustively. Structural
/// problems never reach this point: they are rejected by the constructor.
ValidationReport validate_lattice(const FiniteAlgebra& a);

/// Ways of installing ' on a base semi-Heyting algebra.
enum class NegScheme {
  E,         ///< 0' = 1, 1' = 0 (two-element algebras)
  DP,        ///< additionally a' = 1
  DM,        ///< additionally a' = a
  DMorgan4,  ///< additionally a' = a, b' = b
};

std::string_view scheme_name(NegScheme s);
std::optional<NegScheme> parse_scheme(std::string_view s);

/// Returns a copy of `base` with ' installed according to `scheme`.
/// The scheme must define ' on every element of the base, and the base must
/// not already carry a ' table.
FiniteAlgebra expand(const FiniteAlgebra& base, NegScheme scheme, std::string name = {});

/// Table lookup for a basic or derived operation.
Elem op_apply(const FiniteAlgebra& a, OpName op, std::span<const Elem> args);

/// Induced subalgebra on `elements` (sorted, must be a subuniverse).
FiniteAlgebra induced_subalgebra(const FiniteAlgebra& a, std::span<const Elem> elements,
                                 std::string name = {});

/// Direct product; element (x, y) has index x * |b| + y.
FiniteAlgebra product(const FiniteAlgebra& a, const FiniteAlgebra& b, std::string name = {});

/// Builds join/meet tables of a lattice from its order relation, given as
/// leq[x][y]. Raises StructuralError if some pair lacks a join or meet.
FiniteAlgebra lattice_from_order(std::string name, std::vector<std::string> labels,
                                 const std::vector<std::vector<bool>>& leq);

}  // namespace shw
