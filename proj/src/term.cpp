#include "shw/term.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "shw/error.hpp"

namespace shw {

struct Term::Node {
  TermKind kind;
  std::string name;
  int count = 0;
  std::vector<Term> children;
};

namespace {

enum Level { kArrowLevel = 0, kJoinLevel = 1, kMeetLevel = 2, kPostfixLevel = 3, kAtomLevel = 4 };

}  // namespace

Term Term::var(std::string name) {
  return Term(std::make_shared<const Node>(Node{TermKind::Var, std::move(name), 0, {}}));
}
Term Term::zero() { return Term(std::make_shared<const Node>(Node{TermKind::Zero, {}, 0, {}})); }
Term Term::one() { return Term(std::make_shared<const Node>(Node{TermKind::One, {}, 0, {}})); }
Term Term::join(Term l, Term r) {
  return Term(std::make_shared<const Node>(Node{TermKind::Join, {}, 0, {std::move(l), std::move(r)}}));
}
Term Term::meet(Term l, Term r) {
  return Term(std::make_shared<const Node>(Node{TermKind::Meet, {}, 0, {std::move(l), std::move(r)}}));
}
Term Term::arrow(Term l, Term r) {
  return Term(std::make_shared<const Node>(Node{TermKind::Arrow, {}, 0, {std::move(l), std::move(r)}}));
}
Term Term::neg(Term t) {
  return Term(std::make_shared<const Node>(Node{TermKind::Neg, {}, 0, {std::move(t)}}));
}
Term Term::star(Term t) {
  return Term(std::make_shared<const Node>(Node{TermKind::Star, {}, 0, {std::move(t)}}));
}
Term Term::plus(Term t) {
  return Term(std::make_shared<const Node>(Node{TermKind::Plus, {}, 0, {std::move(t)}}));
}
Term Term::iter_prime_star(Term t, int k) {
  if (k < 1) throw InputError("iteration count must be at least 1");
  return Term(std::make_shared<const Node>(Node{TermKind::IterPrimeStar, {}, k, {std::move(t)}}));
}

TermKind Term::kind() const noexcept { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
int Term::count() const { return node_->count; }
const Term& Term::lhs() const { return node_->children.at(0); }
const Term& Term::rhs() const { return node_->children.at(1); }
bool Term::is_binary() const noexcept { return node_->children.size() == 2; }
bool Term::is_unary() const noexcept { return node_->children.size() == 1; }

namespace {

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind() == TermKind::Var) {
    out.insert(t.name());
    return;
  }
  if (t.is_unary() || t.is_binary()) collect_vars(t.lhs(), out);
  if (t.is_binary()) collect_vars(t.rhs(), out);
}

template <class Pred>
bool any_node(const Term& t, Pred pred) {
  if (pred(t.kind())) return true;
  if ((t.is_unary() || t.is_binary()) && any_node(t.lhs(), pred)) return true;
  return t.is_binary() && any_node(t.rhs(), pred);
}

}  // namespace

std::vector<std::string> Term::variables() const {
  std::set<std::string> vars;
  collect_vars(*this, vars);
  return {vars.begin(), vars.end()};
}

bool Term::uses_arrow() const {
  return any_node(*this, [](TermKind k) {
    return k == TermKind::Arrow || k == TermKind::Star || k == TermKind::Plus ||
           k == TermKind::IterPrimeStar;
  });
}

bool Term::uses_neg() const {
  return any_node(*this, [](TermKind k) {
    return k == TermKind::Neg || k == TermKind::Plus || k == TermKind::IterPrimeStar;
  });
}

std::size_t Term::depth() const {
  std::size_t d = 0;
  if (is_unary() || is_binary()) d = lhs().depth();
  if (is_binary()) d = std::max(d, rhs().depth());
  return d + 1;
}

Term Term::desugared() const {
  switch (kind()) {
    case TermKind::Var:
    case TermKind::Zero:
    case TermKind::One: return *this;
    case TermKind::Join: return join(lhs().desugared(), rhs().desugared());
    case TermKind::Meet: return meet(lhs().desugared(), rhs().desugared());
    case TermKind::Arrow: return arrow(lhs().desugared(), rhs().desugared());
    case TermKind::Neg: return neg(lhs().desugared());
    case TermKind::Star: return arrow(lhs().desugared(), zero());
    case TermKind::Plus: return neg(arrow(neg(lhs().desugared()), zero()));
    case TermKind::IterPrimeStar: {
      Term t = lhs().desugared();
      for (int i = 0; i < count(); ++i) t = arrow(neg(t), zero());
      return t;
    }
  }
  return *this;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name() || a.count() != b.count()) return false;
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!(ca[i] == cb[i])) return false;
  return true;
}

Term Identity::equation_lhs() const { return relation == Relation::Leq ? Term::meet(lhs, rhs) : lhs; }
Term Identity::equation_rhs() const { return relation == Relation::Leq ? lhs : rhs; }

std::vector<std::string> Identity::variables() const {
  std::set<std::string> vars;
  collect_vars(lhs, vars);
  collect_vars(rhs, vars);
  return {vars.begin(), vars.end()};
}
bool Identity::uses_arrow() const { return lhs.uses_arrow() || rhs.uses_arrow(); }
bool Identity::uses_neg() const { return lhs.uses_neg() || rhs.uses_neg(); }

std::vector<std::string> QuasiIdentity::variables() const {
  std::set<std::string> vars;
  for (const auto& p : premises) {
    collect_vars(p.lhs, vars);
    collect_vars(p.rhs, vars);
  }
  collect_vars(conclusion.lhs, vars);
  collect_vars(conclusion.rhs, vars);
  return {vars.begin(), vars.end()};
}
bool QuasiIdentity::uses_arrow() const {
  return conclusion.uses_arrow() || std::any_of(premises.begin(), premises.end(), [](const Premise& p) {
           return p.lhs.uses_arrow() || p.rhs.uses_arrow();
         });
}
bool QuasiIdentity::uses_neg() const {
  return conclusion.uses_neg() || std::any_of(premises.begin(), premises.end(), [](const Premise& p) {
           return p.lhs.uses_neg() || p.rhs.uses_neg();
         });
}

// ---------------------------------------------------------------------------
// Lexer and recursive-descent parser.

namespace {

enum class Tok {
  Ident, Number, LParen, RParen, LBrace, RBrace, Join, Meet, Arrow, Prime, Star, Plus,
  Eq, Leq, Geq, Neq, Comma, Implies, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  // Multi-byte spellings first so that e.g. "<=" wins over "<".
  static const std::vector<std::pair<std::string_view, Tok>> kSymbols = {
      {"=>", Tok::Implies}, {"->", Tok::Arrow}, {"<=", Tok::Leq},   {">=", Tok::Geq},
      {"!=", Tok::Neq},     {"∨", Tok::Join}, {"∧", Tok::Meet}, {"→", Tok::Arrow},
      {"′", Tok::Prime}, {"≈", Tok::Eq}, {"≤", Tok::Leq}, {"≥", Tok::Geq},
      {"≠", Tok::Neq}, {"⁺", Tok::Plus}, {"(", Tok::LParen},  {")", Tok::RParen},
      {"{", Tok::LBrace},   {"}", Tok::RBrace},   {"|", Tok::Join},    {"^", Tok::Meet},
      {"&", Tok::Meet},     {"'", Tok::Prime},    {"*", Tok::Star},    {"+", Tok::Plus},
      {"=", Tok::Eq},       {",", Tok::Comma},
  };
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string word(s.substr(i, j - i));
      out.push_back({word == "v" ? Tok::Join : Tok::Ident, word, i});
      i = j;
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Number, std::string(s.substr(i, j - i)), i});
      i = j;
      continue;
    }
    bool matched = false;
    for (const auto& [text, kind] : kSymbols) {
      if (s.substr(i, text.size()) == text) {
        out.push_back({kind, std::string(text), i});
        i += text.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError("unexpected character '" + std::string(1, s[i]) + "'", i);
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(lex(src)) {
    if (tokens_.size() == 1) throw ParseError("empty input", 0);
  }

  Term term() {
    // Arrow binds weakest and associates to the right.
    Term left = join_expr();
    if (accept(Tok::Arrow)) return Term::arrow(std::move(left), term());
    return left;
  }

  Identity identity() {
    Term l = term();
    const Token& op = peek();
    Identity id{l, l, Relation::Eq, {}, {}};
    if (accept(Tok::Eq)) {
      id.rhs = term();
    } else if (accept(Tok::Leq)) {
      id.relation = Relation::Leq;
      id.rhs = term();
    } else if (accept(Tok::Geq)) {
      id.relation = Relation::Leq;
      id.lhs = term();
      id.rhs = l;
    } else {
      fail("expected '=', '<=' or '>='", op);
    }
    return id;
  }

  QuasiIdentity quasi() {
    std::vector<Premise> premises;
    if (!accept(Tok::Implies)) {
      do {
        Term l = term();
        Premise p{l, l, PremiseRelation::Eq};
        if (accept(Tok::Eq)) {
          p.rhs = term();
        } else if (accept(Tok::Neq)) {
          p.relation = PremiseRelation::Neq;
          p.rhs = term();
        } else if (accept(Tok::Leq)) {
          p.relation = PremiseRelation::Leq;
          p.rhs = term();
        } else if (accept(Tok::Geq)) {
          p.relation = PremiseRelation::Leq;
          p.lhs = term();
          p.rhs = l;
        } else {
          fail("expected a relation in premise", peek());
        }
        premises.push_back(std::move(p));
      } while (accept(Tok::Comma));
      expect(Tok::Implies, "'=>'");
    }
    Identity conclusion = identity();
    return QuasiIdentity{std::move(premises), std::move(conclusion), {}, {}};
  }

  void finish() {
    if (peek().kind != Tok::End) fail("unexpected trailing input", peek());
  }

  bool contains(Tok kind) const {
    return std::any_of(tokens_.begin(), tokens_.end(), [&](const Token& t) { return t.kind == kind; });
  }

 private:
  Term join_expr() {
    Term t = meet_expr();
    while (accept(Tok::Join)) t = Term::join(std::move(t), meet_expr());
    return t;
  }

  Term meet_expr() {
    Term t = postfix_expr();
    while (accept(Tok::Meet)) t = Term::meet(std::move(t), postfix_expr());
    return t;
  }

  Term postfix_expr() {
    Term t = atom();
    for (;;) {
      if (accept(Tok::Prime)) {
        t = Term::neg(std::move(t));
      } else if (accept(Tok::Star)) {
        t = Term::star(std::move(t));
      } else if (accept(Tok::Plus)) {
        t = Term::plus(std::move(t));
      } else if (accept(Tok::LBrace)) {
        const Token& num = peek();
        if (num.kind != Tok::Number) fail("expected iteration count", num);
        ++pos_;
        int k = 0;
        try {
          k = std::stoi(num.text);
        } catch (const std::exception&) {
          fail("iteration count out of range", num);
        }
        if (k < 1) fail("iteration count must be at least 1", num);
        expect(Tok::RBrace, "'}'");
        t = Term::iter_prime_star(std::move(t), k);
      } else {
        return t;
      }
    }
  }

  Term atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Ident: ++pos_; return Term::var(tok.text);
      case Tok::Number:
        ++pos_;
        if (tok.text == "0") return Term::zero();
        if (tok.text == "1") return Term::one();
        fail("only the constants 0 and 1 are allowed", tok);
      case Tok::LParen: {
        ++pos_;
        Term t = term();
        expect(Tok::RParen, "')'");
        return t;
      }
      case Tok::End: fail("unexpected end of input", tok);
      default: fail("unexpected '" + tok.text + "'", tok);
    }
  }

  const Token& peek() const { return tokens_[pos_]; }

  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }

  void expect(Tok kind, const char* what) {
    if (!accept(kind)) fail(std::string("expected ") + what, peek());
  }

  [[noreturn]] void fail(const std::string& msg, const Token& tok) const { throw ParseError(msg, tok.pos); }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Term parse_term(std::string_view src) {
  Parser p(src);
  Term t = p.term();
  p.finish();
  return t;
}

Identity parse_identity(std::string_view src) {
  Parser p(src);
  Identity id = p.identity();
  p.finish();
  id.source = std::string(src);
  return id;
}

QuasiIdentity parse_quasi_identity(std::string_view src) {
  Parser p(src);
  QuasiIdentity q = p.quasi();
  p.finish();
  q.source = std::string(src);
  return q;
}

Statement parse_statement(std::string_view src) {
  if (Parser(src).contains(Tok::Implies)) return parse_quasi_identity(src);
  return parse_identity(src);
}

// ---------------------------------------------------------------------------
// Printing.

namespace {

int level_of(const Term& t) {
  switch (t.kind()) {
    case TermKind::Arrow: return kArrowLevel;
    case TermKind::Join: return kJoinLevel;
    case TermKind::Meet: return kMeetLevel;
    case TermKind::Neg:
    case TermKind::Star:
    case TermKind::Plus:
    case TermKind::IterPrimeStar: return kPostfixLevel;
    default: return kAtomLevel;
  }
}

void print(const Term& t, int min_level, std::string& out) {
  const bool parens = level_of(t) < min_level;
  if (parens) out += '(';
  switch (t.kind()) {
    case TermKind::Var: out += t.name(); break;
    case TermKind::Zero: out += '0'; break;
    case TermKind::One: out += '1'; break;
    case TermKind::Join:
      print(t.lhs(), kJoinLevel, out);
      out += " v ";
      print(t.rhs(), kMeetLevel, out);
      break;
    case TermKind::Meet:
      print(t.lhs(), kMeetLevel, out);
      out += " ^ ";
      print(t.rhs(), kPostfixLevel, out);
      break;
    case TermKind::Arrow:
      print(t.lhs(), kJoinLevel, out);
      out += " -> ";
      print(t.rhs(), kArrowLevel, out);
      break;
    case TermKind::Neg:
      print(t.lhs(), kPostfixLevel, out);
      out += '\'';
      break;
    case TermKind::Star:
      print(t.lhs(), kPostfixLevel, out);
      out += '*';
      break;
    case TermKind::Plus:
      print(t.lhs(), kPostfixLevel, out);
      out += '+';
      break;
    case TermKind::IterPrimeStar:
      print(t.lhs(), kPostfixLevel, out);
      out += '{' + std::to_string(t.count()) + '}';
      break;
  }
  if (parens) out += ')';
}

std::string premise_text(const Premise& p) {
  const char* rel = p.relation == PremiseRelation::Eq ? " = " : p.relation == PremiseRelation::Neq ? " != " : " <= ";
  return pretty(p.lhs) + rel + pretty(p.rhs);
}

}  // namespace

std::string pretty(const Term& t) {
  std::string out;
  print(t, kArrowLevel, out);
  return out;
}

std::string pretty(const Identity& id) {
  return pretty(id.lhs) + (id.relation == Relation::Eq ? " = " : " <= ") + pretty(id.rhs);
}

std::string pretty(const QuasiIdentity& q) {
  std::string out;
  for (std::size_t i = 0; i < q.premises.size(); ++i) {
    if (i) out += ", ";
    out += premise_text(q.premises[i]);
  }
  out += q.premises.empty() ? "=> " : " => ";
  return out + pretty(q.conclusion);
}

// ---------------------------------------------------------------------------
// Evaluation.

void require_signature(const FiniteAlgebra& a, bool arrow, bool neg, std::string_view what) {
  if (arrow && !a.has_arrow()) {
    throw SignatureError(std::string(what) + " uses -> but " + a.name() + " has no -> operation");
  }
  if (neg && !a.has_neg()) {
    throw SignatureError(std::string(what) + " uses ' but " + a.name() + " has no ' operation");
  }
}

namespace {

Elem eval_rec(const FiniteAlgebra& a, const Term& t, const Assignment& env) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = env.find(t.name());
      if (it == env.end()) throw InputError("unbound variable '" + t.name() + "'");
      if (it->second < 0 || static_cast<std::size_t>(it->second) >= a.size()) {
        throw InputError("variable '" + t.name() + "' bound to an element outside " + a.name());
      }
      return it->second;
    }
    case TermKind::Zero: return a.bot();
    case TermKind::One: return a.top();
    case TermKind::Join: return a.join(eval_rec(a, t.lhs(), env), eval_rec(a, t.rhs(), env));
    case TermKind::Meet: return a.meet(eval_rec(a, t.lhs(), env), eval_rec(a, t.rhs(), env));
    case TermKind::Arrow: return a.arrow(eval_rec(a, t.lhs(), env), eval_rec(a, t.rhs(), env));
    case TermKind::Neg: return a.neg(eval_rec(a, t.lhs(), env));
    case TermKind::Star: return a.star(eval_rec(a, t.lhs(), env));
    case TermKind::Plus: return a.plus(eval_rec(a, t.lhs(), env));
    case TermKind::IterPrimeStar: return a.iter_prime_star(eval_rec(a, t.lhs(), env), t.count());
  }
  return -1;
}

void compile_rec(const Term& t, const std::vector<std::string>& vars,
                 std::vector<CompiledTerm::Instr>& code) {
  using Code = CompiledTerm::Code;
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = std::find(vars.begin(), vars.end(), t.name());
      if (it == vars.end()) throw InputError("unbound variable '" + t.name() + "'");
      code.push_back({Code::Var, static_cast<int>(it - vars.begin())});
      return;
    }
    case TermKind::Zero: code.push_back({Code::Zero, 0}); return;
    case TermKind::One: code.push_back({Code::One, 0}); return;
    default: break;
  }
  compile_rec(t.lhs(), vars, code);
  if (t.is_binary()) compile_rec(t.rhs(), vars, code);
  switch (t.kind()) {
    case TermKind::Join: code.push_back({Code::Join, 0}); break;
    case TermKind::Meet: code.push_back({Code::Meet, 0}); break;
    case TermKind::Arrow: code.push_back({Code::Arrow, 0}); break;
    case TermKind::Neg: code.push_back({Code::Neg, 0}); break;
    case TermKind::Star: code.push_back({Code::Star, 0}); break;
    case TermKind::Plus: code.push_back({Code::Plus, 0}); break;
    case TermKind::IterPrimeStar: code.push_back({Code::Iter, t.count()}); break;
    default: break;
  }
}

}  // namespace

Elem eval(const FiniteAlgebra& a, const Term& t, const Assignment& env) {
  require_signature(a, t.uses_arrow(), t.uses_neg(), "term " + pretty(t));
  return eval_rec(a, t, env);
}

CompiledTerm::CompiledTerm(const Term& t, const std::vector<std::string>& var_order) {
  compile_rec(t, var_order, code_);
  std::size_t d = 0;
  for (const auto& in : code_) {
    switch (in.code) {
      case Code::Var:
      case Code::Zero:
      case Code::One: ++d; break;
      case Code::Join:
      case Code::Meet:
      case Code::Arrow: --d; break;
      default: break;
    }
    depth_ = std::max(depth_, d);
  }
}

Elem CompiledTerm::eval(const FiniteAlgebra& a, std::span<const Elem> values) const {
  Elem stack[64] = {};
  std::vector<Elem> heap;
  Elem* sp = stack;
  if (depth_ > 64) {
    heap.resize(depth_);
    sp = heap.data();
  }
  Elem* base = sp;
  for (const auto& in : code_) {
    switch (in.code) {
      case Code::Var: *sp++ = values[static_cast<std::size_t>(in.arg)]; break;
      case Code::Zero: *sp++ = a.bot(); break;
      case Code::One: *sp++ = a.top(); break;
      case Code::Join: --sp; sp[-1] = a.join(sp[-1], sp[0]); break;
      case Code::Meet: --sp; sp[-1] = a.meet(sp[-1], sp[0]); break;
      case Code::Arrow: --sp; sp[-1] = a.arrow(sp[-1], sp[0]); break;
      case Code::Neg: sp[-1] = a.neg(sp[-1]); break;
      case Code::Star: sp[-1] = a.star(sp[-1]); break;
      case Code::Plus: sp[-1] = a.plus(sp[-1]); break;
      case Code::Iter: sp[-1] = a.iter_prime_star(sp[-1], in.arg); break;
    }
  }
  return base[0];
}

}  // namespace shw
