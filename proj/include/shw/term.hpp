#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shw/algebra.hpp"

namespace shw {

enum class TermKind { Var, Zero, One, Join, Meet, Arrow, Neg, Star, Plus, IterPrimeStar };

/// Immutable term AST. Copies share structure.
///
/// Star, Plus and IterPrimeStar are sugar: x* is x -> 0, x+ is ((x')*)',
/// and x{k} is k-fold application of x |-> (x')*.
class Term {
 public:
  static Term var(std::string name);
  static Term zero();
  static Term one();
  static Term join(Term l, Term r);
  static Term meet(Term l, Term r);
  static Term arrow(Term l, Term r);
  static Term neg(Term t);
  static Term star(Term t);
  static Term plus(Term t);
  static Term iter_prime_star(Term t, int k);

  TermKind kind() const noexcept;
  const std::string& name() const;
  int count() const;
  /// Left operand of a binary node, or the operand of a unary node.
  const Term& lhs() const;
  const Term& rhs() const;

  bool is_binary() const noexcept;
  bool is_unary() const noexcept;

  /// Free variables, sorted and unique.
  std::vector<std::string> variables() const;
  bool uses_arrow() const;
  bool uses_neg() const;
  std::size_t depth() const;

  /// Rewrites Star, Plus and IterPrimeStar into Arrow/Neg/Const0.
  Term desugared() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

enum class Relation { Eq, Leq };

/// s = t, or s <= t which means s ^ t = s.
struct Identity {
  Term lhs;
  Term rhs;
  Relation relation = Relation::Eq;
  std::string label;
  std::string source;

  /// The two sides of the equation that is actually checked.
  Term equation_lhs() const;
  Term equation_rhs() const;
  std::vector<std::string> variables() const;
  bool uses_arrow() const;
  bool uses_neg() const;
};

enum class PremiseRelation { Eq, Neq, Leq };

struct Premise {
  Term lhs;
  Term rhs;
  PremiseRelation relation = PremiseRelation::Eq;
};

/// premises => conclusion, checked assignment-wise.
struct QuasiIdentity {
  std::vector<Premise> premises;
  Identity conclusion;
  std::string label;
  std::string source;

  std::vector<std::string> variables() const;
  bool uses_arrow() const;
  bool uses_neg() const;
};

using Statement = std::variant<Identity, QuasiIdentity>;

Term parse_term(std::string_view src);
Identity parse_identity(std::string_view src);
QuasiIdentity parse_quasi_identity(std::string_view src);
/// Identity or quasi-identity, depending on whether `=>` occurs.
Statement parse_statement(std::string_view src);

std::string pretty(const Term& t);
std::string pretty(const Identity& id);
std::string pretty(const QuasiIdentity& q);

using Assignment = std::map<std::string, Elem>;

/// Evaluates t bottom-up through the tables of `a`. Raises InputError for an
/// unbound variable and SignatureError when t needs an absent operation.
Elem eval(const FiniteAlgebra& a, const Term& t, const Assignment& env);

/// Checks that `a` provides every operation `t` mentions.
void require_signature(const FiniteAlgebra& a, bool arrow, bool neg, std::string_view what);

/// Flat postfix program for repeated evaluation over many assignments.
/// Variables are bound by position in the order given at construction.
class CompiledTerm {
 public:
  enum class Code : unsigned char { Var, Zero, One, Join, Meet, Arrow, Neg, Star, Plus, Iter };
  struct Instr {
    Code code;
    int arg;
  };

  CompiledTerm() = default;
  CompiledTerm(const Term& t, const std::vector<std::string>& var_order);

  Elem eval(const FiniteAlgebra& a, std::span<const Elem> values) const;
  const std::vector<Instr>& code() const noexcept { return code_; }
  std::size_t stack_depth() const noexcept { return depth_; }

 private:
  std::vector<Instr> code_;
  std::size_t depth_ = 0;
};

}  // namespace shw
