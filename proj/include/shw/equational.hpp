#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shw/algebra.hpp"
#include "shw/term.hpp"

namespace shw {

/// Outcome of an exhaustive check. On failure `witness` holds the
/// lexicographically first failing assignment, one value per entry of
/// `variables` (sorted names, element index order, last variable fastest).
struct CheckResult {
  bool holds = true;
  std::vector<std::string> variables;
  std::vector<Elem> witness;

  Assignment witness_assignment() const;
  /// "x=0, y=a" using the element labels of `a`.
  std::string witness_text(const FiniteAlgebra& a) const;
};

CheckResult satisfies(const FiniteAlgebra& a, const Identity& id);
CheckResult satisfies(const FiniteAlgebra& a, std::string_view identity_src);
CheckResult satisfies_quasi(const FiniteAlgebra& a, const QuasiIdentity& q);

struct Suite {
  std::string name;
  std::string about;
  std::vector<Identity> identities;
  std::vector<QuasiIdentity> quasi;
  /// Other "%key value" lines of the suite file, in order.
  std::vector<std::pair<std::string, std::string>> meta;

  /// Value of the first "%key" line, or nullptr.
  const std::string* meta_value(std::string_view key) const;
  bool needs_arrow() const;
  bool needs_neg() const;
  std::size_t size() const noexcept { return identities.size() + quasi.size(); }
};

struct SuiteReport {
  struct Entry {
    std::string label;
    std::string source;
    CheckResult result;
  };
  std::string suite;
  std::string algebra;
  std::vector<Entry> entries;

  bool holds() const;
  std::vector<const Entry*> failures() const;
};

/// Checks every member of the suite; the verdict never short-circuits.
/// Raises SignatureError before checking anything if `a` lacks an operation
/// the suite uses.
SuiteReport satisfies_suite(const FiniteAlgebra& a, const Suite& s);

/// Named suites parsed from the .ids files compiled into the binary.
class SuiteLibrary {
 public:
  static const SuiteLibrary& builtin();
  /// Parses .ids text; `origin` is used in error messages. "%include" may
  /// also name suites of `prior`.
  static SuiteLibrary parse(std::string_view text, std::string_view origin, const SuiteLibrary* prior = nullptr);
  static SuiteLibrary load_file(const std::string& path);

  bool contains(std::string_view name) const;
  const Suite& get(std::string_view name) const;
  std::vector<std::string> names() const;
  /// Union of the named suites, in order, labelled `name`.
  Suite combine(const std::vector<std::string>& names, std::string name = {}) const;

 private:
  std::vector<Suite> suites_;
};

/// Resolves a comma-separated list of suite names and/or identity sources.
Suite resolve_suite_spec(const std::vector<std::string>& items, std::string name);

}  // namespace shw
