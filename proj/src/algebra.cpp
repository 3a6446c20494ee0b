#include "shw/algebra.hpp"

#include <algorithm>
#include <set>

#include "shw/error.hpp"

namespace shw {

BinaryTable::BinaryTable(std::size_t n, std::vector<Elem> cells) : n_(n), cells_(std::move(cells)) {
  if (cells_.size() != n_ * n_) {
    throw StructuralError("table has " + std::to_string(cells_.size()) + " cells, expected " +
                          std::to_string(n_ * n_));
  }
}

BinaryTable BinaryTable::from_rows(const std::vector<std::vector<Elem>>& rows) {
  std::vector<Elem> cells;
  cells.reserve(rows.size() * rows.size());
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw StructuralError("table is not square");
    cells.insert(cells.end(), row.begin(), row.end());
  }
  return BinaryTable(rows.size(), std::move(cells));
}

std::vector<std::vector<Elem>> BinaryTable::rows() const {
  std::vector<std::vector<Elem>> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i].assign(cells_.begin() + i * n_, cells_.begin() + (i + 1) * n_);
  return out;
}

std::string_view op_name(OpName op) {
  switch (op) {
    case OpName::Join: return "join";
    case OpName::Meet: return "meet";
    case OpName::Arrow: return "arrow";
    case OpName::Neg: return "neg";
    case OpName::Star: return "star";
    case OpName::Plus: return "plus";
    case OpName::DoublePrime: return "dprime";
  }
  return "?";
}

std::size_t op_arity(OpName op) {
  switch (op) {
    case OpName::Join:
    case OpName::Meet:
    case OpName::Arrow: return 2;
    default: return 1;
  }
}

namespace {

void check_table(const BinaryTable& t, std::size_t n, const char* what) {
  if (t.size() != n) {
    throw StructuralError(std::string(what) + " table has size " + std::to_string(t.size()) +
                          ", universe has " + std::to_string(n) + " elements");
  }
  for (Elem v : t.cells()) {
    if (v < 0 || static_cast<std::size_t>(v) >= n) {
      throw StructuralError(std::string(what) + " table entry " + std::to_string(v) + " out of range");
    }
  }
}

}  // namespace

FiniteAlgebra::FiniteAlgebra(std::string name, std::vector<std::string> labels, BinaryTable join,
                             BinaryTable meet, std::optional<BinaryTable> arrow,
                             std::optional<std::vector<Elem>> neg, Elem bot, Elem top)
    : name_(std::move(name)),
      labels_(std::move(labels)),
      join_(std::move(join)),
      meet_(std::move(meet)),
      arrow_(std::move(arrow)),
      neg_(std::move(neg)),
      bot_(bot),
      top_(top) {
  const std::size_t n = labels_.size();
  if (n == 0) throw StructuralError("empty universe");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != n) throw StructuralError("element labels are not unique");
  check_table(join_, n, "join");
  check_table(meet_, n, "meet");
  if (arrow_) check_table(*arrow_, n, "arrow");
  if (neg_) {
    if (neg_->size() != n) throw StructuralError("neg table has wrong length");
    for (Elem v : *neg_) {
      if (v < 0 || static_cast<std::size_t>(v) >= n) {
        throw StructuralError("neg table entry " + std::to_string(v) + " out of range");
      }
    }
  }
  auto in_range = [n](Elem e) { return e >= 0 && static_cast<std::size_t>(e) < n; };
  if (!in_range(bot_) || !in_range(top_)) throw StructuralError("constant out of range");
}

std::optional<Elem> FiniteAlgebra::find(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Elem>(it - labels_.begin());
}

Elem FiniteAlgebra::index_of(std::string_view label) const {
  if (auto e = find(label)) return *e;
  throw InputError("algebra " + name_ + " has no element '" + std::string(label) + "'");
}

Elem FiniteAlgebra::iter_prime_star(Elem x, int k) const noexcept {
  for (int i = 0; i < k; ++i) x = star(neg(x));
  return x;
}

void FiniteAlgebra::require_arrow() const {
  if (!arrow_) throw SignatureError("algebra " + name_ + " has no -> operation");
}

void FiniteAlgebra::require_neg() const {
  if (!neg_) throw SignatureError("algebra " + name_ + " has no ' operation");
}

FiniteAlgebra FiniteAlgebra::renamed(std::string name) const {
  FiniteAlgebra copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

FiniteAlgebra FiniteAlgebra::with_arrow(BinaryTable arrow) const {
  return FiniteAlgebra(name_, labels_, join_, meet_, std::move(arrow), neg_, bot_, top_);
}

FiniteAlgebra FiniteAlgebra::with_neg(std::vector<Elem> neg) const {
  return FiniteAlgebra(name_, labels_, join_, meet_, arrow_, std::move(neg), bot_, top_);
}

FiniteAlgebra FiniteAlgebra::lattice_reduct() const {
  return FiniteAlgebra(name_, labels_, join_, meet_, std::nullopt, std::nullopt, bot_, top_);
}

bool FiniteAlgebra::same_tables(const FiniteAlgebra& other) const {
  return join_ == other.join_ && meet_ == other.meet_ && arrow_ == other.arrow_ &&
         neg_ == other.neg_ && bot_ == other.bot_ && top_ == other.top_;
}

ValidationReport validate_lattice(const FiniteAlgebra& a) {
  ValidationReport report;
  const Elem n = static_cast<Elem>(a.size());
  auto fail = [&](const char* law, std::vector<Elem> w) {
    // One witness per law keeps reports readable.
    for (const auto& f : report.failures)
      if (f.law == law) return;
    report.failures.push_back({law, std::move(w)});
  };
  for (Elem x = 0; x < n; ++x) {
    if (a.join(x, x) != x) fail("join idempotent", {x});
    if (a.meet(x, x) != x) fail("meet idempotent", {x});
    if (a.join(x, a.bot()) != x) fail("bottom is join identity", {x});
    if (a.meet(x, a.top()) != x) fail("top is meet identity", {x});
    for (Elem y = 0; y < n; ++y) {
      if (a.join(x, y) != a.join(y, x)) fail("join commutative", {x, y});
      if (a.meet(x, y) != a.meet(y, x)) fail("meet commutative", {x, y});
      if (a.join(x, a.meet(x, y)) != x) fail("absorption x v (x ^ y) = x", {x, y});
      if (a.meet(x, a.join(x, y)) != x) fail("absorption x ^ (x v y) = x", {x, y});
      for (Elem z = 0; z < n; ++z) {
        if (a.join(x, a.join(y, z)) != a.join(a.join(x, y), z)) fail("join associative", {x, y, z});
        if (a.meet(x, a.meet(y, z)) != a.meet(a.meet(x, y), z)) fail("meet associative", {x, y, z});
        if (a.meet(x, a.join(y, z)) != a.join(a.meet(x, y), a.meet(x, z))) {
          fail("distributive", {x, y, z});
        }
      }
    }
  }
  return report;
}

std::string_view scheme_name(NegScheme s) {
  switch (s) {
    case NegScheme::E: return "e";
    case NegScheme::DP: return "dp";
    case NegScheme::DM: return "dm";
    case NegScheme::DMorgan4: return "dmorgan4";
  }
  return "?";
}

std::optional<NegScheme> parse_scheme(std::string_view s) {
  if (s == "e") return NegScheme::E;
  if (s == "dp") return NegScheme::DP;
  if (s == "dm") return NegScheme::DM;
  if (s == "dmorgan4") return NegScheme::DMorgan4;
  return std::nullopt;
}

FiniteAlgebra expand(const FiniteAlgebra& base, NegScheme scheme, std::string name) {
  if (base.has_neg()) throw InputError("algebra " + base.name() + " already has a ' operation");
  std::vector<std::pair<std::string, std::string>> rule = {{"0", "1"}, {"1", "0"}};
  switch (scheme) {
    case NegScheme::E: break;
    case NegScheme::DP: rule.emplace_back("a", "1"); break;
    case NegScheme::DM: rule.emplace_back("a", "a"); break;
    case NegScheme::DMorgan4:
      rule.emplace_back("a", "a");
      rule.emplace_back("b", "b");
      break;
  }
  std::vector<Elem> neg(base.size(), -1);
  for (const auto& [from, to] : rule) {
    auto x = base.find(from);
    auto y = base.find(to);
    if (!x || !y) {
      throw InputError("scheme " + std::string(scheme_name(scheme)) + " refers to element '" +
                       (!x ? from : to) + "' missing from " + base.name());
    }
    neg[static_cast<std::size_t>(*x)] = *y;
  }
  for (std::size_t i = 0; i < neg.size(); ++i) {
    if (neg[i] < 0) {
      throw InputError("scheme " + std::string(scheme_name(scheme)) + " leaves ' undefined on '" +
                       base.labels()[i] + "' of " + base.name());
    }
  }
  if (name.empty()) name = base.name() + std::string(scheme_name(scheme));
  return base.with_neg(std::move(neg)).renamed(std::move(name));
}

Elem op_apply(const FiniteAlgebra& a, OpName op, std::span<const Elem> args) {
  if (args.size() != op_arity(op)) {
    throw InputError(std::string(op_name(op)) + " takes " + std::to_string(op_arity(op)) +
                     " argument(s)");
  }
  for (Elem e : args) {
    if (e < 0 || static_cast<std::size_t>(e) >= a.size()) throw InputError("argument out of range");
  }
  switch (op) {
    case OpName::Join: return a.join(args[0], args[1]);
    case OpName::Meet: return a.meet(args[0], args[1]);
    case OpName::Arrow: a.require_arrow(); return a.arrow(args[0], args[1]);
    case OpName::Neg: a.require_neg(); return a.neg(args[0]);
    case OpName::Star: a.require_arrow(); return a.star(args[0]);
    case OpName::Plus:
      a.require_arrow();
      a.require_neg();
      return a.plus(args[0]);
    case OpName::DoublePrime: a.require_neg(); return a.dprime(args[0]);
  }
  return -1;
}

FiniteAlgebra induced_subalgebra(const FiniteAlgebra& a, std::span<const Elem> elements,
                                 std::string name) {
  std::vector<Elem> inv(a.size(), -1);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    inv[static_cast<std::size_t>(elements[i])] = static_cast<Elem>(i);
    labels.push_back(a.label(elements[i]));
  }
  const std::size_t m = elements.size();
  auto map = [&](Elem e) {
    Elem r = inv[static_cast<std::size_t>(e)];
    if (r < 0) throw DomainError("element set is not closed under the operations of " + a.name());
    return r;
  };
  auto restrict = [&](auto&& op) {
    std::vector<Elem> cells;
    cells.reserve(m * m);
    for (Elem x : elements)
      for (Elem y : elements) cells.push_back(map(op(x, y)));
    return BinaryTable(m, std::move(cells));
  };
  BinaryTable join = restrict([&](Elem x, Elem y) { return a.join(x, y); });
  BinaryTable meet = restrict([&](Elem x, Elem y) { return a.meet(x, y); });
  std::optional<BinaryTable> arrow;
  if (a.has_arrow()) arrow = restrict([&](Elem x, Elem y) { return a.arrow(x, y); });
  std::optional<std::vector<Elem>> neg;
  if (a.has_neg()) {
    neg.emplace();
    for (Elem x : elements) neg->push_back(map(a.neg(x)));
  }
  if (name.empty()) name = a.name() + "|sub";
  return FiniteAlgebra(std::move(name), std::move(labels), std::move(join), std::move(meet),
                       std::move(arrow), std::move(neg), map(a.bot()), map(a.top()));
}

FiniteAlgebra product(const FiniteAlgebra& a, const FiniteAlgebra& b, std::string name) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = na * nb;
  auto idx = [nb](Elem x, Elem y) { return static_cast<Elem>(static_cast<std::size_t>(x) * nb + y); };
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = 0; y < nb; ++y) labels.push_back("(" + a.labels()[x] + "," + b.labels()[y] + ")");
  auto combine = [&](auto&& opa, auto&& opb) {
    std::vector<Elem> cells;
    cells.reserve(n * n);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        Elem x1 = static_cast<Elem>(p / nb), y1 = static_cast<Elem>(p % nb);
        Elem x2 = static_cast<Elem>(q / nb), y2 = static_cast<Elem>(q % nb);
        cells.push_back(idx(opa(x1, x2), opb(y1, y2)));
      }
    return BinaryTable(n, std::move(cells));
  };
  auto join = combine([&](Elem x, Elem y) { return a.join(x, y); },
                      [&](Elem x, Elem y) { return b.join(x, y); });
  auto meet = combine([&](Elem x, Elem y) { return a.meet(x, y); },
                      [&](Elem x, Elem y) { return b.meet(x, y); });
  std::optional<BinaryTable> arrow;
  if (a.has_arrow() && b.has_arrow()) {
    arrow = combine([&](Elem x, Elem y) { return a.arrow(x, y); },
                    [&](Elem x, Elem y) { return b.arrow(x, y); });
  }
  std::optional<std::vector<Elem>> neg;
  if (a.has_neg() && b.has_neg()) {
    neg.emplace();
    for (std::size_t p = 0; p < n; ++p)
      neg->push_back(idx(a.neg(static_cast<Elem>(p / nb)), b.neg(static_cast<Elem>(p % nb))));
  }
  if (name.empty()) name = a.name() + "x" + b.name();
  return FiniteAlgebra(std::move(name), std::move(labels), std::move(join), std::move(meet),
                       std::move(arrow), std::move(neg), idx(a.bot(), b.bot()), idx(a.top(), b.top()));
}

FiniteAlgebra lattice_from_order(std::string name, std::vector<std::string> labels,
                                 const std::vector<std::vector<bool>>& leq) {
  const std::size_t n = labels.size();
  if (leq.size() != n) throw StructuralError("order relation has wrong size");
  auto bound = [&](Elem x, Elem y, bool upper) -> Elem {
    // Least upper bound (or greatest lower bound) among common bounds.
    std::vector<Elem> common;
    for (Elem z = 0; z < static_cast<Elem>(n); ++z) {
      bool ok = upper ? (leq[x][z] && leq[y][z]) : (leq[z][x] && leq[z][y]);
      if (ok) common.push_back(z);
    }
    for (Elem c : common) {
      bool extreme = std::all_of(common.begin(), common.end(),
                                 [&](Elem d) { return upper ? leq[c][d] : leq[d][c]; });
      if (extreme) return c;
    }
    throw StructuralError("elements " + labels[x] + " and " + labels[y] + " have no " +
                          (upper ? "join" : "meet"));
  };
  std::vector<Elem> join, meet;
  for (Elem x = 0; x < static_cast<Elem>(n); ++x)
    for (Elem y = 0; y < static_cast<Elem>(n); ++y) {
      join.push_back(bound(x, y, true));
      meet.push_back(bound(x, y, false));
    }
  Elem bot = -1, top = -1;
  for (Elem x = 0; x < static_cast<Elem>(n); ++x) {
    bool is_bot = true, is_top = true;
    for (Elem y = 0; y < static_cast<Elem>(n); ++y) {
      is_bot = is_bot && leq[x][y];
      is_top = is_top && leq[y][x];
    }
    if (is_bot) bot = x;
    if (is_top) top = x;
  }
  if (bot < 0 || top < 0) throw StructuralError("order has no bottom or top");
  return FiniteAlgebra(std::move(name), std::move(labels), BinaryTable(n, std::move(join)),
                       BinaryTable(n, std::move(meet)), std::nullopt, std::nullopt, bot, top);
}

}  // namespace shw
