#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shw/algebra.hpp"
#include "shw/equational.hpp"

namespace shw {

using SimpleMask = std::uint64_t;

/// A finite list of pairwise non-isomorphic simple algebras together with
/// its subalgebra preorder: sub_mask(i) has bit j set iff member j embeds
/// into member i (bit i is always set).
///
/// In a finitely generated discriminator variety every subvariety is
/// generated by the simple algebras it contains, and those form a set closed
/// under isomorphic copies of subalgebras. Subvarieties are therefore handled
/// as IS-closed subsets of an ambient list.
class Ambient {
 public:
  Ambient(std::string name, std::vector<std::string> keys, std::vector<FiniteAlgebra> simples);

  /// rdqdstsh1, rdmsh1, rdpcsh1, dqdbsh (case-insensitive), plus rdmh1 and
  /// rdmcmsh1 (rdmsh1 restricted to the Heyting resp. commutative members).
  static std::shared_ptr<const Ambient> named(std::string_view name);
  static std::vector<std::string> known_names();

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return keys_.size(); }
  const std::string& key(std::size_t i) const { return keys_.at(i); }
  const std::vector<std::string>& keys() const noexcept { return keys_; }
  const FiniteAlgebra& algebra(std::size_t i) const { return simples_.at(i); }
  std::optional<std::size_t> find(std::string_view key) const;
  std::size_t index_of(std::string_view key) const;
  SimpleMask sub_mask(std::size_t i) const { return subs_.at(i); }
  SimpleMask full_mask() const;
  SimpleMask mask_of(const std::vector<std::string>& keys) const;
  std::vector<std::string> keys_of(SimpleMask m) const;

  /// Members satisfying every identity of `s`, as a new ambient.
  std::shared_ptr<const Ambient> filtered(const Suite& s, std::string name) const;

 private:
  std::string name_;
  std::vector<std::string> keys_;
  std::vector<FiniteAlgebra> simples_;
  std::vector<SimpleMask> subs_;
};

/// A subvariety: an IS-closed subset of an ambient list of simples.
class ClosedSimpleSet {
 public:
  ClosedSimpleSet(std::shared_ptr<const Ambient> ambient, SimpleMask mask);

  const Ambient& ambient() const noexcept { return *ambient_; }
  const std::shared_ptr<const Ambient>& ambient_ptr() const noexcept { return ambient_; }
  SimpleMask mask() const noexcept { return mask_; }
  bool contains(std::string_view key) const;
  bool empty() const noexcept { return mask_ == 0; }
  std::vector<std::string> keys() const { return ambient_->keys_of(mask_); }

  friend bool operator==(const ClosedSimpleSet& l, const ClosedSimpleSet& r) {
    return l.ambient_ == r.ambient_ && l.mask_ == r.mask_;
  }

 private:
  std::shared_ptr<const Ambient> ambient_;
  SimpleMask mask_;
};

/// True iff `s` embeds into some generator (IS-membership). Every input must
/// be simple; otherwise DomainError.
bool in_variety(const FiniteAlgebra& s, std::span<const FiniteAlgebra> gens);

SimpleMask is_closure_mask(const Ambient& ambient, SimpleMask set);
ClosedSimpleSet is_closure(const std::shared_ptr<const Ambient>& ambient, const std::vector<std::string>& keys);
bool is_closed(const Ambient& ambient, SimpleMask set);

/// Number of IS-closed subsets (the trivial variety included), by exhaustive
/// enumeration of all 2^n subsets, sharded over `jobs` threads.
std::uint64_t subvariety_count(const Ambient& ambient, unsigned jobs = 1);

/// A product of factors B_n (Boolean lattice, n atoms) and 1+B_n.
struct ShapeSpec {
  struct Factor {
    bool lifted = false;  ///< 1+B_n
    int atoms = 0;
    friend auto operator<=>(const Factor&, const Factor&) = default;
  };
  std::vector<Factor> factors;

  std::uint64_t cardinality() const;
  std::string to_string() const;
  /// Parses e.g. "(1+B9)x(1+B5)xB9".
  static ShapeSpec parse(std::string_view text);
  bool same_factors(const ShapeSpec& other) const;
};

struct DecompositionResult {
  bool ok = false;
  std::string reason;
  /// A member and one of its proper subalgebras that break the expected
  /// depth-one preorder.
  std::optional<std::pair<std::string, std::string>> offending;
  ShapeSpec derived;
  std::uint64_t count = 0;
};

/// Checks that the subalgebra preorder has depth one with every non-minimal
/// member above exactly one minimal member, derives the product shape it
/// forces, compares it with `shape` and cross-checks the cardinality with
/// subvariety_count.
DecompositionResult verify_decomposition(const Ambient& ambient, const ShapeSpec& shape, unsigned jobs = 1);

ClosedSimpleSet variety_meet(const ClosedSimpleSet& a, const ClosedSimpleSet& b);
ClosedSimpleSet variety_join(const ClosedSimpleSet& a, const ClosedSimpleSet& b);

}  // namespace shw
