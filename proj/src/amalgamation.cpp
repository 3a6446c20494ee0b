#include "shw/amalgamation.hpp"

#include <algorithm>
#include <bit>
#include <functional>

#include "shw/error.hpp"
#include "shw/parallel.hpp"
#include "shw/structure.hpp"

namespace shw {

namespace {

std::vector<Elem> compose(const std::vector<Elem>& outer, const std::vector<Elem>& inner) {
  std::vector<Elem> out(inner.size());
  for (std::size_t x = 0; x < inner.size(); ++x) out[x] = outer[static_cast<std::size_t>(inner[x])];
  return out;
}

bool agrees(const std::vector<Elem>& f, const std::vector<Elem>& i, const std::vector<Elem>& g,
            const std::vector<Elem>& j) {
  for (std::size_t x = 0; x < i.size(); ++x) {
    if (f[static_cast<std::size_t>(i[x])] != g[static_cast<std::size_t>(j[x])]) return false;
  }
  return true;
}

std::vector<std::vector<Elem>> embeddings(const FiniteAlgebra& from, const FiniteAlgebra& to) {
  std::vector<std::vector<Elem>> out;
  if (from.size() > to.size()) return out;
  for (auto& m : find_morphisms(from, to, MorphismKind::Embedding)) out.push_back(std::move(m.image));
  return out;
}

void require_member(const ClosedSimpleSet& v, const std::string& key) {
  if (!v.contains(key)) throw DomainError(key + " is not in the chosen subvariety");
}

// An amalgam with B, C in v and no host in v breaks AP for v.
struct Constraint {
  SimpleMask need;
  SimpleMask where;
  friend auto operator<=>(const Constraint&, const Constraint&) = default;
};

}  // namespace

std::string_view status_name(AmalgamStatus s) {
  switch (s) {
    case AmalgamStatus::Witness: return "witness";
    case AmalgamStatus::Obstructed: return "obstructed";
    case AmalgamStatus::NotFound: return "not-found";
  }
  return "?";
}

std::vector<Amalgam> enumerate_amalgams(const ClosedSimpleSet& v) {
  const Ambient& amb = v.ambient();
  const auto keys = v.keys();
  std::vector<Amalgam> out;
  for (const auto& ka : keys) {
    const auto& a = amb.algebra(amb.index_of(ka));
    std::vector<std::vector<Elem>> autos;
    for (auto& m : automorphisms(a)) autos.push_back(std::move(m.image));
    for (const auto& kb : keys) {
      const auto ib = embeddings(a, amb.algebra(amb.index_of(kb)));
      if (ib.empty()) continue;
      for (const auto& kc : keys) {
        const auto jc = embeddings(a, amb.algebra(amb.index_of(kc)));
        for (const auto& i : ib) {
          for (const auto& j : jc) {
            // Keep (i, j) only if it is the least member of its Aut(A) orbit.
            bool least = true;
            for (const auto& s : autos) {
              auto is = compose(i, s);
              auto js = compose(j, s);
              if (std::tie(is, js) < std::tie(i, j)) {
                least = false;
                break;
              }
            }
            if (least) out.push_back({ka, kb, kc, i, j});
          }
        }
      }
    }
  }
  return out;
}

AmalgamVerdict decide_amalgamation(const Amalgam& am, const ClosedSimpleSet& v) {
  require_member(v, am.b);
  require_member(v, am.c);
  const Ambient& amb = v.ambient();
  const auto& b = amb.algebra(amb.index_of(am.b));
  const auto& c = amb.algebra(amb.index_of(am.c));
  AmalgamVerdict verdict{am, AmalgamStatus::Obstructed, std::nullopt, {}};
  for (const auto& ks : v.keys()) {
    const auto& s = amb.algebra(amb.index_of(ks));
    const auto fs = embeddings(b, s);
    const auto gs = embeddings(c, s);
    for (const auto& f : fs) {
      for (const auto& g : gs) {
        if (agrees(f, am.i, g, am.j)) {
          verdict.status = AmalgamStatus::Witness;
          verdict.witness = AmalgamWitness{ks, {ks}, s, f, g};
          verdict.obstructions.clear();
          return verdict;
        }
      }
    }
    verdict.obstructions.push_back({ks, fs.empty(), gs.empty(), !fs.empty() && !gs.empty()});
  }
  return verdict;
}

AmalgamVerdict brute_force_amalgamation(const Amalgam& am, const ClosedSimpleSet& v, int max_factors) {
  if (max_factors < 1) throw InputError("max_factors must be at least 1");
  require_member(v, am.b);
  require_member(v, am.c);
  const Ambient& amb = v.ambient();
  const auto& b = amb.algebra(amb.index_of(am.b));
  const auto& c = amb.algebra(amb.index_of(am.c));
  const auto keys = v.keys();
  AmalgamVerdict verdict{am, AmalgamStatus::NotFound, std::nullopt, {}};

  // Every multiset of at most max_factors members, in nondecreasing index order.
  std::vector<std::size_t> chosen;
  std::function<bool(std::size_t)> visit = [&](std::size_t from) -> bool {
    if (!chosen.empty()) {
      FiniteAlgebra d = amb.algebra(amb.index_of(keys[chosen[0]]));
      std::string desc = keys[chosen[0]];
      std::vector<std::string> factors{keys[chosen[0]]};
      for (std::size_t k = 1; k < chosen.size(); ++k) {
        const auto& key = keys[chosen[k]];
        desc += " x " + key;
        factors.push_back(key);
        d = product(d, amb.algebra(amb.index_of(key)), desc);
      }
      const auto fs = embeddings(b, d);
      const auto gs = embeddings(c, d);
      for (const auto& f : fs) {
        for (const auto& g : gs) {
          if (agrees(f, am.i, g, am.j)) {
            verdict.status = AmalgamStatus::Witness;
            verdict.witness = AmalgamWitness{desc, factors, d, f, g};
            return true;
          }
        }
      }
    }
    if (static_cast<int>(chosen.size()) == max_factors) return false;
    for (std::size_t k = from; k < keys.size(); ++k) {
      chosen.push_back(k);
      if (visit(k)) return true;
      chosen.pop_back();
    }
    return false;
  };
  visit(0);
  return verdict;
}

bool revalidate(const AmalgamVerdict& verdict, const Ambient& ambient) {
  if (verdict.status != AmalgamStatus::Witness || !verdict.witness) return false;
  const auto& am = verdict.amalgam;
  const auto& w = *verdict.witness;
  const auto ia = ambient.find(am.a), ib = ambient.find(am.b), ic = ambient.find(am.c);
  if (!ia || !ib || !ic || w.factors.empty()) return false;
  const auto& a = ambient.algebra(*ia);
  const auto& b = ambient.algebra(*ib);
  const auto& c = ambient.algebra(*ic);

  FiniteAlgebra expected = ambient.algebra(ambient.index_of(w.factors[0]));
  for (std::size_t k = 1; k < w.factors.size(); ++k) {
    expected = product(expected, ambient.algebra(ambient.index_of(w.factors[k])));
  }
  if (!expected.same_tables(w.target)) return false;

  auto injective = [](const std::vector<Elem>& m) {
    auto sorted = m;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  };
  auto embeds = [&](const FiniteAlgebra& from, const FiniteAlgebra& to, const std::vector<Elem>& m) {
    return m.size() == from.size() && injective(m) && preserves_operations(from, to, m);
  };
  return embeds(a, b, am.i) && embeds(a, c, am.j) && embeds(b, w.target, w.f) && embeds(c, w.target, w.g) &&
         agrees(w.f, am.i, w.g, am.j);
}

std::vector<AmalgamVerdict> amalgam_table(const ClosedSimpleSet& v, unsigned jobs) {
  const auto amalgams = enumerate_amalgams(v);
  std::vector<AmalgamVerdict> out(amalgams.size());
  parallel_for(amalgams.size(), jobs, [&](std::size_t k) { out[k] = decide_amalgamation(amalgams[k], v); });
  return out;
}

ApCensus ap_census(const std::shared_ptr<const Ambient>& ambient, unsigned jobs) {
  const Ambient& amb = *ambient;
  const std::size_t n = amb.size();
  const ClosedSimpleSet full(ambient, amb.full_mask());
  const auto amalgams = enumerate_amalgams(full);

  // W(am): members of the ambient in which the amalgam completes.
  std::vector<SimpleMask> where(amalgams.size(), 0);
  parallel_for(amalgams.size(), jobs, [&](std::size_t k) {
    const auto& am = amalgams[k];
    const auto& b = amb.algebra(amb.index_of(am.b));
    const auto& c = amb.algebra(amb.index_of(am.c));
    for (std::size_t s = 0; s < n; ++s) {
      const auto fs = embeddings(b, amb.algebra(s));
      const auto gs = embeddings(c, amb.algebra(s));
      bool ok = false;
      for (std::size_t x = 0; x < fs.size() && !ok; ++x)
        for (std::size_t y = 0; y < gs.size() && !ok; ++y) ok = agrees(fs[x], am.i, gs[y], am.j);
      if (ok) where[k] |= SimpleMask{1} << s;
    }
  });

  ApCensus census;
  // A subvariety v fails AP iff some amalgam has B, C in v and W disjoint from v.
  std::vector<Constraint> constraints;
  for (std::size_t k = 0; k < amalgams.size(); ++k) {
    const SimpleMask need = (SimpleMask{1} << amb.index_of(amalgams[k].b)) |
                            (SimpleMask{1} << amb.index_of(amalgams[k].c));
    if ((where[k] & need) == need) continue;  // B or C itself always hosts it
    constraints.push_back({need, where[k]});
    const SimpleMask generated = is_closure_mask(amb, need);
    if ((where[k] & generated) == 0) {
      census.minimal_failures.push_back(decide_amalgamation(amalgams[k], ClosedSimpleSet(ambient, generated)));
    }
  }
  std::sort(constraints.begin(), constraints.end());
  constraints.erase(std::unique(constraints.begin(), constraints.end()), constraints.end());
  // Drop constraints implied by a weaker one (smaller need, smaller host set).
  std::vector<Constraint> kept;
  for (const auto& c : constraints) {
    bool implied = std::any_of(constraints.begin(), constraints.end(), [&](const Constraint& d) {
      return !(d == c) && (d.need & ~c.need) == 0 && (d.where & ~c.where) == 0;
    });
    if (!implied) kept.push_back(c);
  }

  // Enumerate closed sets directly: members in an order where subalgebras
  // come first, each included only when its proper subalgebras are.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::popcount(amb.sub_mask(x)) < std::popcount(amb.sub_mask(y));
  });
  std::function<void(std::size_t, SimpleMask)> walk = [&](std::size_t depth, SimpleMask m) {
    if (depth == n) {
      ++census.subvarieties;
      for (const auto& c : kept) {
        if ((c.need & ~m) == 0 && (c.where & m) == 0) {
          ++census.without_ap;
          break;
        }
      }
      return;
    }
    const std::size_t i = order[depth];
    walk(depth + 1, m);
    if ((amb.sub_mask(i) & ~(SimpleMask{1} << i) & ~m) == 0) walk(depth + 1, m | (SimpleMask{1} << i));
  };
  walk(0, 0);
  return census;
}

}  // namespace shw
