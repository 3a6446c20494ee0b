#pragma once

#include <map>
#include <string>
#include <vector>

#include "shw/equational.hpp"
#include "shw/structure.hpp"
#include "shw/varieties.hpp"

/// Whole-catalog checks composed from the module operations. Every report
/// carries enough data (failing assignments, missing embeddings) to be
/// checked by hand.
namespace shw {

/// One suite checked on one algebra.
struct SuiteCheck {
  std::string algebra;
  std::string suite;
  bool expected = true;  ///< whether the suite is required to hold
  SuiteReport report;
};

/// The membership table for the catalog simples: DQD, St, L1 and R on all
/// of them, DM on the involutive ones, PC on the dp expansions, Bo on D1-D3.
struct CatalogConformance {
  std::vector<SuiteCheck> checks;
  std::vector<const SuiteCheck*> unexpected_failures() const;
  bool ok() const { return unexpected_failures().empty(); }
};

CatalogConformance catalog_conformance();

/// The DQD-lemmas suite on all 25 simples and regular-lemmas on the 15
/// involutive ones.
struct LemmaReport {
  std::vector<SuiteCheck> checks;
  std::size_t statements_checked = 0;
  std::vector<const SuiteCheck*> violations() const;
  bool ok() const { return violations().empty(); }
};

LemmaReport run_lemma_suite(unsigned jobs = 1);

/// An equational base read against an ambient list of simples.
struct BaseEntry {
  std::string id;
  std::string about;
  std::string ambient;
  Suite base;
  std::vector<std::string> generators;
  bool hand_verified = false;
};

/// Every suite of the builtin library that declares an "%ambient".
std::vector<BaseEntry> base_library();

struct BaseCheck {
  BaseEntry entry;
  std::vector<std::string> sat;       ///< ambient members satisfying the base
  std::vector<std::string> expected;  ///< IS-closure of the generators
  bool sat_closed = true;             ///< sanity: SAT-sets are IS-closed
  /// Expected member failing the base: the identity and its witness.
  struct Failing {
    std::string simple;
    std::string label;
    std::string witness;
  };
  /// Member satisfying the base that embeds into no generator.
  struct Unexpected {
    std::string simple;
    std::vector<std::string> generators_checked;
  };
  std::vector<Failing> failing;
  std::vector<Unexpected> unexpected;

  bool pass() const { return failing.empty() && unexpected.empty(); }
};

struct ConformanceTable {
  std::vector<BaseCheck> rows;
  std::size_t passes() const;
  /// Rows marked hand-verified that do not pass.
  std::vector<const BaseCheck*> hand_verified_failures() const;
};

ConformanceTable verify_bases(unsigned jobs = 1);

/// Simplicity facts for every catalog simple and each of its subalgebras.
struct SimplicityRow {
  std::string algebra;
  std::size_t congruences = 0;
  std::size_t subalgebras = 0;
  bool subalgebras_simple = true;
  bool simple_iff_si = true;  ///< checked on the algebra and its subalgebras
};

std::vector<SimplicityRow> simplicity_table(unsigned jobs = 1);

struct PrimalityRow {
  std::string algebra;
  PrimalityReport report;
};

/// A reading of the claim "the listed algebras are primal, the rest are
/// semiprimal".
struct PrimalityReading {
  std::string name;
  std::vector<std::string> claimed_primal;
  bool primal_set_matches = false;
  std::vector<std::string> not_semiprimal;  ///< claimed semiprimal, computed otherwise
  std::vector<std::string> primal_mismatch;  ///< symmetric difference of primal sets
};

struct PrimalityComparison {
  std::vector<PrimalityRow> rows;
  std::vector<PrimalityReading> readings;  ///< "dm only", "dm and dp"
};

PrimalityComparison primality_comparison(unsigned jobs = 1);

struct CepRow {
  std::string algebra;
  bool cep = false;
};

std::vector<CepRow> cep_table(unsigned jobs = 1);

}  // namespace shw
