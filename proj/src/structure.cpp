#include "shw/structure.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "shw/error.hpp"

namespace shw {

namespace {

using Mask = std::uint64_t;

void require_small(const FiniteAlgebra& a) {
  if (a.size() > 64) throw DomainError("algebra " + a.name() + " has more than 64 elements");
}

Mask bit(Elem x) { return Mask{1} << x; }

ElemSet to_set(Mask m) {
  ElemSet out;
  for (Elem x = 0; m; ++x, m >>= 1)
    if (m & 1) out.push_back(x);
  return out;
}

Mask close_mask(const FiniteAlgebra& a, Mask start) {
  Mask have = start | bit(a.bot()) | bit(a.top());
  std::vector<Elem> members = to_set(have);
  std::deque<Elem> fresh(members.begin(), members.end());
  auto add = [&](Elem z) {
    if (!(have & bit(z))) {
      have |= bit(z);
      members.push_back(z);
      fresh.push_back(z);
    }
  };
  while (!fresh.empty()) {
    Elem x = fresh.front();
    fresh.pop_front();
    if (a.has_neg()) add(a.neg(x));
    for (std::size_t i = 0; i < members.size(); ++i) {
      Elem y = members[i];
      add(a.join(x, y));
      add(a.meet(x, y));
      if (a.has_arrow()) {
        add(a.arrow(x, y));
        add(a.arrow(y, x));
      }
    }
  }
  return have;
}

bool set_less(const ElemSet& l, const ElemSet& r) {
  if (l.size() != r.size()) return l.size() < r.size();
  return l < r;
}

}  // namespace

ElemSet subuniverse_closure(const FiniteAlgebra& a, std::span<const Elem> seed) {
  require_small(a);
  Mask m = 0;
  for (Elem x : seed) m |= bit(x);
  return to_set(close_mask(a, m));
}

std::vector<ElemSet> all_subalgebras(const FiniteAlgebra& a) {
  require_small(a);
  // Every subuniverse is reached from the least one by adding one generator
  // at a time, so a search over single-element extensions finds them all.
  std::set<Mask> seen;
  std::deque<Mask> queue;
  Mask least = close_mask(a, 0);
  seen.insert(least);
  queue.push_back(least);
  while (!queue.empty()) {
    Mask s = queue.front();
    queue.pop_front();
    for (Elem x = 0; x < static_cast<Elem>(a.size()); ++x) {
      if (s & bit(x)) continue;
      Mask t = close_mask(a, s | bit(x));
      if (seen.insert(t).second) queue.push_back(t);
    }
  }
  std::vector<ElemSet> out;
  for (Mask m : seen) out.push_back(to_set(m));
  std::sort(out.begin(), out.end(), set_less);
  return out;
}

// ---------------------------------------------------------------------------

bool preserves_operations(const FiniteAlgebra& a, const FiniteAlgebra& b, std::span<const Elem> h) {
  if (h.size() != a.size()) return false;
  if (h[a.bot()] != b.bot() || h[a.top()] != b.top()) return false;
  const Elem n = static_cast<Elem>(a.size());
  for (Elem x = 0; x < n; ++x) {
    if (h[x] < 0 || static_cast<std::size_t>(h[x]) >= b.size()) return false;
  }
  for (Elem x = 0; x < n; ++x) {
    if (a.has_neg() && h[a.neg(x)] != b.neg(h[x])) return false;
    for (Elem y = 0; y < n; ++y) {
      if (h[a.join(x, y)] != b.join(h[x], h[y])) return false;
      if (h[a.meet(x, y)] != b.meet(h[x], h[y])) return false;
      if (a.has_arrow() && h[a.arrow(x, y)] != b.arrow(h[x], h[y])) return false;
    }
  }
  return true;
}

namespace {

class MorphismSearch {
 public:
  MorphismSearch(const FiniteAlgebra& a, const FiniteAlgebra& b, MorphismKind kind)
      : a_(a), b_(b), kind_(kind), image_(a.size(), -1), used_(b.size(), 0) {}

  std::vector<Morphism> run() {
    if (kind_ == MorphismKind::Iso && a_.size() != b_.size()) return {};
    if (kind_ != MorphismKind::Hom && a_.size() > b_.size()) return {};
    if (!assign(a_.bot(), b_.bot())) return {};
    if (a_.top() != a_.bot()) {
      if (!assign(a_.top(), b_.top())) return {};
    } else if (b_.top() != b_.bot()) {
      return {};
    }
    for (Elem x = 0; x < static_cast<Elem>(a_.size()); ++x)
      if (image_[x] < 0) order_.push_back(x);
    extend(0);
    return std::move(found_);
  }

 private:
  bool assign(Elem x, Elem y) {
    if (kind_ != MorphismKind::Hom && used_[y]) return false;
    image_[x] = y;
    ++used_[y];
    if (consistent()) return true;
    unassign(x);
    return false;
  }

  void unassign(Elem x) {
    --used_[image_[x]];
    image_[x] = -1;
  }

  bool consistent() const {
    const Elem n = static_cast<Elem>(a_.size());
    for (Elem x = 0; x < n; ++x) {
      Elem hx = image_[x];
      if (hx < 0) continue;
      if (a_.has_neg()) {
        Elem r = image_[a_.neg(x)];
        if (r >= 0 && r != b_.neg(hx)) return false;
      }
      for (Elem y = 0; y < n; ++y) {
        Elem hy = image_[y];
        if (hy < 0) continue;
        Elem r = image_[a_.join(x, y)];
        if (r >= 0 && r != b_.join(hx, hy)) return false;
        r = image_[a_.meet(x, y)];
        if (r >= 0 && r != b_.meet(hx, hy)) return false;
        if (a_.has_arrow()) {
          r = image_[a_.arrow(x, y)];
          if (r >= 0 && r != b_.arrow(hx, hy)) return false;
        }
      }
    }
    return true;
  }

  void extend(std::size_t depth) {
    if (depth == order_.size()) {
      Morphism m{image_, true};
      std::vector<char> seen(b_.size(), 0);
      for (Elem y : image_) {
        if (seen[y]) m.injective = false;
        seen[y] = 1;
      }
      found_.push_back(std::move(m));
      return;
    }
    Elem x = order_[depth];
    for (Elem y = 0; y < static_cast<Elem>(b_.size()); ++y) {
      if (assign(x, y)) {
        extend(depth + 1);
        unassign(x);
      }
    }
  }

  const FiniteAlgebra& a_;
  const FiniteAlgebra& b_;
  MorphismKind kind_;
  std::vector<Elem> image_;
  std::vector<int> used_;
  std::vector<Elem> order_;
  std::vector<Morphism> found_;
};

}  // namespace

std::vector<Morphism> find_morphisms(const FiniteAlgebra& a, const FiniteAlgebra& b, MorphismKind kind) {
  if (a.has_arrow() != b.has_arrow() || a.has_neg() != b.has_neg()) {
    throw SignatureError("algebras " + a.name() + " and " + b.name() + " have different signatures");
  }
  return MorphismSearch(a, b, kind).run();
}

std::vector<Morphism> automorphisms(const FiniteAlgebra& a) { return find_morphisms(a, a, MorphismKind::Iso); }

bool is_isomorphic(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (a.size() != b.size() || a.has_arrow() != b.has_arrow() || a.has_neg() != b.has_neg()) return false;
  return !find_morphisms(a, b, MorphismKind::Iso).empty();
}

// ---------------------------------------------------------------------------

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  Elem find(Elem x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(Elem x, Elem y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (y < x) std::swap(x, y);
    parent_[y] = x;
    return true;
  }
  Partition partition() {
    std::vector<Elem> block(parent_.size());
    for (Elem x = 0; x < static_cast<Elem>(parent_.size()); ++x) block[x] = find(x);
    return Partition(std::move(block));
  }

 private:
  std::vector<Elem> parent_;
};

}  // namespace

Partition::Partition(std::vector<Elem> block_of) : block_of_(std::move(block_of)) {
  // Normalise so that every block is labelled by its least element.
  std::vector<Elem> least(block_of_.size(), -1);
  for (Elem x = 0; x < static_cast<Elem>(block_of_.size()); ++x) {
    Elem& l = least[block_of_[x]];
    if (l < 0) l = x;
  }
  for (auto& b : block_of_) b = least[b];
}

Partition Partition::identity(std::size_t n) {
  std::vector<Elem> b(n);
  std::iota(b.begin(), b.end(), 0);
  return Partition(std::move(b));
}

Partition Partition::total(std::size_t n) { return Partition(std::vector<Elem>(n, 0)); }

std::size_t Partition::block_count() const {
  std::size_t c = 0;
  for (Elem x = 0; x < static_cast<Elem>(block_of_.size()); ++x) c += block_of_[x] == x;
  return c;
}

std::vector<ElemSet> Partition::blocks() const {
  std::vector<ElemSet> out;
  std::vector<int> slot(block_of_.size(), -1);
  for (Elem x = 0; x < static_cast<Elem>(block_of_.size()); ++x) {
    Elem b = block_of_[x];
    if (slot[b] < 0) {
      slot[b] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[b]].push_back(x);
  }
  return out;
}

bool Partition::is_identity() const { return block_count() == size(); }
bool Partition::is_total() const { return block_count() <= 1; }

bool Partition::refines(const Partition& other) const {
  for (Elem x = 0; x < static_cast<Elem>(size()); ++x)
    if (!other.related(x, block(x))) return false;
  return true;
}

Partition partition_meet(const Partition& p, const Partition& q) {
  const std::size_t n = p.size();
  std::vector<Elem> block(n);
  for (Elem x = 0; x < static_cast<Elem>(n); ++x) {
    block[x] = x;
    for (Elem y = 0; y < x; ++y) {
      if (p.related(x, y) && q.related(x, y)) {
        block[x] = block[y];
        break;
      }
    }
  }
  return Partition(std::move(block));
}

Partition partition_join(const Partition& p, const Partition& q) {
  UnionFind uf(p.size());
  for (Elem x = 0; x < static_cast<Elem>(p.size()); ++x) {
    uf.unite(x, p.block(x));
    uf.unite(x, q.block(x));
  }
  return uf.partition();
}

bool composition_is_total(const Partition& p, const Partition& q) {
  const Elem n = static_cast<Elem>(p.size());
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      bool ok = false;
      for (Elem z = 0; z < n && !ok; ++z) ok = p.related(x, z) && q.related(z, y);
      if (!ok) return false;
    }
  return true;
}

bool is_compatible(const FiniteAlgebra& a, const Partition& p) {
  const Elem n = static_cast<Elem>(a.size());
  for (Elem x = 0; x < n; ++x)
    for (Elem x2 = 0; x2 < n; ++x2) {
      if (!p.related(x, x2)) continue;
      if (a.has_neg() && !p.related(a.neg(x), a.neg(x2))) return false;
      for (Elem y = 0; y < n; ++y)
        for (Elem y2 = 0; y2 < n; ++y2) {
          if (!p.related(y, y2)) continue;
          if (!p.related(a.join(x, y), a.join(x2, y2))) return false;
          if (!p.related(a.meet(x, y), a.meet(x2, y2))) return false;
          if (a.has_arrow() && !p.related(a.arrow(x, y), a.arrow(x2, y2))) return false;
        }
    }
  return true;
}

Partition congruence_generated(const FiniteAlgebra& a, std::span<const std::pair<Elem, Elem>> pairs) {
  const Elem n = static_cast<Elem>(a.size());
  UnionFind uf(a.size());
  std::deque<std::pair<Elem, Elem>> work;
  auto merge = [&](Elem u, Elem v) {
    if (uf.unite(u, v)) work.emplace_back(u, v);
  };
  for (auto [u, v] : pairs) merge(u, v);
  // Each pair that merged two blocks is pushed through every basic
  // translation; the resulting equivalence is then compatible.
  while (!work.empty()) {
    auto [u, v] = work.front();
    work.pop_front();
    if (a.has_neg()) merge(a.neg(u), a.neg(v));
    for (Elem w = 0; w < n; ++w) {
      merge(a.join(u, w), a.join(v, w));
      merge(a.meet(u, w), a.meet(v, w));
      if (a.has_arrow()) {
        merge(a.arrow(u, w), a.arrow(v, w));
        merge(a.arrow(w, u), a.arrow(w, v));
      }
    }
  }
  return uf.partition();
}

Partition principal_congruence(const FiniteAlgebra& a, Elem x, Elem y) {
  std::pair<Elem, Elem> p{x, y};
  return congruence_generated(a, std::span(&p, 1));
}

std::vector<Partition> congruence_lattice(const FiniteAlgebra& a) {
  const Elem n = static_cast<Elem>(a.size());
  std::set<Partition> all;
  all.insert(Partition::identity(a.size()));
  all.insert(Partition::total(a.size()));
  std::vector<Partition> principal;
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y) {
      Partition p = principal_congruence(a, x, y);
      if (all.insert(p).second) principal.push_back(p);
    }
  // Every congruence is a join of principal ones.
  std::vector<Partition> frontier(all.begin(), all.end());
  while (!frontier.empty()) {
    std::vector<Partition> next;
    for (const auto& p : frontier)
      for (const auto& q : principal) {
        Partition j = partition_join(p, q);
        if (all.insert(j).second) next.push_back(j);
      }
    frontier = std::move(next);
  }
  std::vector<Partition> out(all.begin(), all.end());
  std::stable_sort(out.begin(), out.end(), [](const Partition& l, const Partition& r) {
    return l.block_count() > r.block_count();
  });
  return out;
}

bool is_simple(const FiniteAlgebra& a) { return congruence_lattice(a).size() == 2; }

bool is_subdirectly_irreducible(const FiniteAlgebra& a) {
  auto cons = congruence_lattice(a);
  std::vector<const Partition*> atoms;
  for (const auto& c : cons) {
    if (c.is_identity()) continue;
    bool minimal = true;
    for (const auto& d : cons) {
      if (d.is_identity() || d == c) continue;
      if (d.refines(c)) minimal = false;
    }
    if (minimal) atoms.push_back(&c);
  }
  return atoms.size() == 1;
}

bool is_directly_indecomposable(const FiniteAlgebra& a) {
  if (a.size() < 2) return false;
  auto cons = congruence_lattice(a);
  for (const auto& p : cons) {
    if (p.is_identity() || p.is_total()) continue;
    for (const auto& q : cons) {
      if (q.is_identity() || q.is_total()) continue;
      if (partition_meet(p, q).is_identity() && composition_is_total(p, q)) return false;
    }
  }
  return true;
}

bool has_cep(const FiniteAlgebra& a) {
  for (const auto& sub : all_subalgebras(a)) {
    FiniteAlgebra b = induced_subalgebra(a, sub);
    for (const auto& theta : congruence_lattice(b)) {
      std::vector<std::pair<Elem, Elem>> pairs;
      for (Elem x = 0; x < static_cast<Elem>(sub.size()); ++x) pairs.emplace_back(sub[x], sub[theta.block(x)]);
      Partition big = congruence_generated(a, pairs);
      for (Elem x = 0; x < static_cast<Elem>(sub.size()); ++x)
        for (Elem y = 0; y < static_cast<Elem>(sub.size()); ++y)
          if (big.related(sub[x], sub[y]) != theta.related(x, y)) return false;
    }
  }
  return true;
}

std::string_view primality_name(Primality p) {
  switch (p) {
    case Primality::Primal: return "primal";
    case Primality::Semiprimal: return "semiprimal";
    case Primality::QuasiprimalOnly: return "quasiprimal-only";
    case Primality::NotQuasiprimal: return "not-quasiprimal";
  }
  return "?";
}

PrimalityReport classify_primality(const FiniteAlgebra& a) {
  if (!is_simple(a)) throw DomainError("algebra " + a.name() + " is not simple");
  PrimalityReport r;
  const auto subs = all_subalgebras(a);
  r.subalgebra_count = subs.size();
  r.automorphism_count = automorphisms(a).size();
  for (const auto& s : subs) {
    if (!is_simple(induced_subalgebra(a, s))) r.subalgebras_simple = false;
  }
  const FiniteAlgebra square = product(a, a);
  const std::size_t n = a.size();
  const auto square_subs = all_subalgebras(square);
  r.square_subuniverses = square_subs.size();
  for (const auto& s : square_subs) {
    std::set<Elem> left, right;
    std::vector<std::pair<Elem, Elem>> pairs;
    for (Elem p : s) {
      Elem x = static_cast<Elem>(static_cast<std::size_t>(p) / n);
      Elem y = static_cast<Elem>(static_cast<std::size_t>(p) % n);
      left.insert(x);
      right.insert(y);
      pairs.emplace_back(x, y);
    }
    const bool is_product = s.size() == left.size() * right.size();
    const bool is_graph = s.size() == left.size() && s.size() == right.size();
    if (is_graph) {
      bool identity = std::all_of(pairs.begin(), pairs.end(), [](auto pr) { return pr.first == pr.second; });
      if (!identity) r.nontrivial_internal_isos.push_back(pairs);
    } else if (!is_product) {
      r.irregular.push_back(pairs);
    }
  }
  if (!r.irregular.empty() || !r.subalgebras_simple) {
    r.kind = Primality::NotQuasiprimal;
  } else if (!r.nontrivial_internal_isos.empty()) {
    r.kind = Primality::QuasiprimalOnly;
  } else if (r.subalgebra_count == 1 && r.automorphism_count == 1) {
    r.kind = Primality::Primal;
  } else {
    r.kind = Primality::Semiprimal;
  }
  return r;
}

}  // namespace shw
