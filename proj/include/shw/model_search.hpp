#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shw/algebra.hpp"
#include "shw/equational.hpp"

namespace shw {

enum class CellOrder { RowMajor, ColumnMajor };

/// What to search for on a fixed bounded distributive lattice.
struct SearchSpec {
  FiniteAlgebra lattice;           ///< only the lattice reduct is used
  Suite required;                  ///< identities drive propagation, quasi-identities are leaf checks
  std::vector<Identity> forbidden;  ///< each must fail in a solution
  std::optional<std::size_t> limit;
  double timeout_seconds = 300.0;  ///< <= 0 disables the timeout
  CellOrder order = CellOrder::RowMajor;
  unsigned jobs = 1;
  std::string name_prefix = "M";
};

struct SearchSolution {
  FiniteAlgebra algebra;
  /// Index of an earlier solution that is isomorphic to this one through a
  /// lattice automorphism, if any.
  std::optional<std::size_t> duplicate_of;
};

struct SearchResult {
  std::vector<SearchSolution> solutions;  ///< sorted by (neg table, arrow rows)
  bool inconclusive = false;              ///< timeout hit before exhausting the tree
  bool truncated = false;                 ///< limit reached
  std::uint64_t nodes = 0;
  double seconds = 0.0;

  std::vector<FiniteAlgebra> algebras() const;
};

/// Backtracking over the ' cells (when the suite uses ') and then the arrow
/// cells, with single-cell domain filtering and watched-instance
/// propagation of every identity instance. Solutions are re-verified by
/// satisfies_suite before being reported. Raises InputError if the lattice
/// is not a bounded distributive lattice.
SearchResult enumerate_algebras(const SearchSpec& spec);

struct StoneViolator {
  FiniteAlgebra algebra;
  CheckResult failure;
};

struct StoneCheckReport {
  int max_size = 0;
  std::vector<std::size_t> lattices_per_size;  ///< index = size, up to max_size
  std::size_t algebras_checked = 0;
  std::vector<StoneViolator> violators;
  bool inconclusive = false;
};

/// Bounded distributive lattices with 2..max_size elements, one per
/// isomorphism class, ordered by size and then by canonical order relation.
std::vector<FiniteAlgebra> distributive_lattices(int size);

/// For every lattice of size <= max_size, every algebra satisfying
/// SH + DQD + DM + L1 + R is checked for the Stone identity.
StoneCheckReport exhaustive_stone_check(int max_size, unsigned jobs = 1, double timeout_seconds = 0.0);

struct CounterexampleResult {
  std::optional<FiniteAlgebra> algebra;
  bool inconclusive = false;
  std::uint64_t nodes = 0;
  double seconds = 0.0;
};

/// First algebra on `lattice` satisfying SH + DQD + DM + L2 + R and failing
/// the Stone identity.
CounterexampleResult find_stone_counterexample_level2(const FiniteAlgebra& lattice, double timeout_seconds = 300.0,
                                                      unsigned jobs = 1);

}  // namespace shw
