#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shw/algebra.hpp"

namespace shw {

/// Sorted list of element indices.
using ElemSet = std::vector<Elem>;

/// Least subuniverse containing `seed` and the constants 0, 1.
ElemSet subuniverse_closure(const FiniteAlgebra& a, std::span<const Elem> seed);

/// All subuniverses, sorted by size and then lexicographically.
std::vector<ElemSet> all_subalgebras(const FiniteAlgebra& a);

enum class MorphismKind { Hom, Embedding, Iso };

struct Morphism {
  std::vector<Elem> image;  ///< image[x] is the image of element x
  bool injective = false;

  friend bool operator==(const Morphism&, const Morphism&) = default;
};

/// Every morphism a -> b of the requested kind, lexicographic by image.
/// Both algebras must have the same signature.
std::vector<Morphism> find_morphisms(const FiniteAlgebra& a, const FiniteAlgebra& b, MorphismKind kind);
std::vector<Morphism> automorphisms(const FiniteAlgebra& a);
bool is_isomorphic(const FiniteAlgebra& a, const FiniteAlgebra& b);

/// Exhaustive re-check that `image` preserves every operation and constant.
bool preserves_operations(const FiniteAlgebra& a, const FiniteAlgebra& b, std::span<const Elem> image);

/// Partition of the universe; block_of[x] is the least element of x's block.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<Elem> block_of);
  static Partition identity(std::size_t n);
  static Partition total(std::size_t n);

  std::size_t size() const noexcept { return block_of_.size(); }
  Elem block(Elem x) const { return block_of_[static_cast<std::size_t>(x)]; }
  bool related(Elem x, Elem y) const { return block(x) == block(y); }
  std::size_t block_count() const;
  std::vector<ElemSet> blocks() const;
  const std::vector<Elem>& block_of() const noexcept { return block_of_; }
  bool is_identity() const;
  bool is_total() const;
  bool refines(const Partition& other) const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition&, const Partition&) = default;

 private:
  std::vector<Elem> block_of_;
};

using CongruencePartition = Partition;

Partition partition_meet(const Partition& p, const Partition& q);
Partition partition_join(const Partition& p, const Partition& q);
/// True iff p o q is the total relation.
bool composition_is_total(const Partition& p, const Partition& q);

bool is_compatible(const FiniteAlgebra& a, const Partition& p);
/// Smallest congruence identifying every listed pair.
Partition congruence_generated(const FiniteAlgebra& a, std::span<const std::pair<Elem, Elem>> pairs);
Partition principal_congruence(const FiniteAlgebra& a, Elem x, Elem y);

/// All congruences: principal ones closed under join, sorted from the
/// identity (most blocks) to the total relation.
std::vector<Partition> congruence_lattice(const FiniteAlgebra& a);

bool is_simple(const FiniteAlgebra& a);
bool is_subdirectly_irreducible(const FiniteAlgebra& a);
bool is_directly_indecomposable(const FiniteAlgebra& a);

/// Congruence extension property, checked over every subalgebra.
bool has_cep(const FiniteAlgebra& a);

enum class Primality { Primal, Semiprimal, QuasiprimalOnly, NotQuasiprimal };
std::string_view primality_name(Primality p);

struct PrimalityReport {
  Primality kind = Primality::NotQuasiprimal;
  std::size_t subalgebra_count = 0;
  std::size_t automorphism_count = 0;
  bool subalgebras_simple = true;
  std::size_t square_subuniverses = 0;
  /// Subuniverses of A^2 that are neither a product nor the graph of an
  /// isomorphism between subalgebras, as lists of (x, y) pairs.
  std::vector<std::vector<std::pair<Elem, Elem>>> irregular;
  /// Internal isomorphisms other than identity maps, as lists of pairs.
  std::vector<std::vector<std::pair<Elem, Elem>>> nontrivial_internal_isos;
};

/// Decides quasiprimality through the subuniverses of A^2: each must be a
/// product of two subuniverses or the graph of an isomorphism between
/// subalgebras, and every subalgebra must be simple (Pixley/Werner).
/// Semiprimal additionally requires every internal isomorphism to be an
/// identity map; primal requires no proper subalgebra and no nontrivial
/// automorphism. Raises DomainError for a non-simple algebra.
PrimalityReport classify_primality(const FiniteAlgebra& a);

}  // namespace shw
