#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shw/algebra.hpp"
#include "shw/varieties.hpp"

namespace shw {

/// (A; B, C) with embeddings i: A -> B and j: A -> C, all members of one
/// ambient list of simples.
struct Amalgam {
  std::string a, b, c;
  std::vector<Elem> i, j;

  friend bool operator==(const Amalgam&, const Amalgam&) = default;
};

struct AmalgamWitness {
  std::string description;  ///< catalog key, or "K1 x K2" for a product
  std::vector<std::string> factors;  ///< ambient keys of the product factors
  FiniteAlgebra target;
  std::vector<Elem> f;  ///< embedding B -> target
  std::vector<Elem> g;  ///< embedding C -> target
};

/// Why a particular simple S fails to amalgamate.
struct Obstruction {
  std::string simple;
  bool no_b_embedding = false;
  bool no_c_embedding = false;
  bool no_agreement = false;  ///< both embed, but never with f.i = g.j
};

enum class AmalgamStatus { Witness, Obstructed, NotFound };
std::string_view status_name(AmalgamStatus s);

struct AmalgamVerdict {
  Amalgam amalgam;
  AmalgamStatus status = AmalgamStatus::NotFound;
  std::optional<AmalgamWitness> witness;
  std::vector<Obstruction> obstructions;
};

/// Every (A; B, C) with A, B, C in v and all embedding pairs (i, j), one
/// representative per orbit of Aut(A) acting by (i, j) -> (i.s, j.s).
std::vector<Amalgam> enumerate_amalgams(const ClosedSimpleSet& v);

/// Searches every simple S in v for embeddings f: B -> S, g: C -> S with
/// f.i = g.j. In a variety whose subdirectly irreducibles are simple with
/// 0 != 1, any amalgamating algebra projects onto such an S, so failing
/// every S is a proof that the amalgam cannot be completed inside v.
AmalgamVerdict decide_amalgamation(const Amalgam& am, const ClosedSimpleSet& v);

/// Independent search over products of at most `max_factors` simples of v.
/// Success yields a witness; failure is reported as NotFound (inconclusive).
AmalgamVerdict brute_force_amalgamation(const Amalgam& am, const ClosedSimpleSet& v, int max_factors);

/// Re-checks a witness: f, g injective and operation preserving, f.i = g.j.
bool revalidate(const AmalgamVerdict& verdict, const Ambient& ambient);

/// Verdicts for every enumerated amalgam of v, in enumeration order.
std::vector<AmalgamVerdict> amalgam_table(const ClosedSimpleSet& v, unsigned jobs = 1);

/// How many subvarieties of an ambient fail the amalgamation property.
struct ApCensus {
  std::uint64_t subvarieties = 0;
  std::uint64_t without_ap = 0;
  /// Amalgams that fail already in the subvariety generated by B and C.
  std::vector<AmalgamVerdict> minimal_failures;
};

ApCensus ap_census(const std::shared_ptr<const Ambient>& ambient, unsigned jobs = 1);

}  // namespace shw
