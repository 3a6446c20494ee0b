#include "shw/varieties.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <mutex>

#include "shw/catalog.hpp"
#include "shw/error.hpp"
#include "shw/parallel.hpp"
#include "shw/structure.hpp"

namespace shw {

namespace {

SimpleMask bit(std::size_t i) { return SimpleMask{1} << i; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

Ambient::Ambient(std::string name, std::vector<std::string> keys, std::vector<FiniteAlgebra> simples)
    : name_(std::move(name)), keys_(std::move(keys)), simples_(std::move(simples)) {
  if (keys_.size() != simples_.size()) throw InputError("ambient keys and algebras differ in number");
  if (keys_.size() > 64) throw DomainError("ambient lists are limited to 64 simples");
  const std::size_t n = keys_.size();
  subs_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& big = simples_[i];
      const auto& small = simples_[j];
      if (i == j || (small.size() <= big.size() &&
                     !find_morphisms(small, big, MorphismKind::Embedding).empty())) {
        subs_[i] |= bit(j);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((subs_[i] & bit(j)) && (subs_[j] & bit(i))) {
        throw DomainError("ambient members " + keys_[i] + " and " + keys_[j] + " are isomorphic");
      }
}

std::shared_ptr<const Ambient> Ambient::named(std::string_view raw) {
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<const Ambient>> cache;
  const std::string name = lower(raw);
  std::lock_guard lock(mutex);
  if (auto it = cache.find(name); it != cache.end()) return it->second;

  auto from_family = [](const std::string& family, const std::string& label) {
    std::vector<FiniteAlgebra> algebras;
    for (const auto& k : catalog::family(family)) algebras.push_back(catalog::get(k));
    return std::make_shared<const Ambient>(label, catalog::family(family), std::move(algebras));
  };
  std::shared_ptr<const Ambient> made;
  if (name == "rdqdstsh1") made = from_family("RDQDStSH1", name);
  else if (name == "rdmsh1") made = from_family("RDMSH1", name);
  else if (name == "rdpcsh1") made = from_family("RDPCSH1", name);
  else if (name == "dqdbsh") made = from_family("DQDBSH", name);
  else if (name == "rdmh1" || name == "rdmcmsh1") {
    // Recursion on the cache would self-deadlock; build the base directly.
    auto base = cache.count("rdmsh1") ? cache.at("rdmsh1") : from_family("RDMSH1", "rdmsh1");
    cache.emplace("rdmsh1", base);
    const auto& lib = SuiteLibrary::builtin();
    made = base->filtered(lib.get(name == "rdmh1" ? "SH4" : "Co"), name);
  } else {
    throw InputError("unknown ambient '" + std::string(raw) + "'");
  }
  cache.emplace(name, made);
  return made;
}

std::vector<std::string> Ambient::known_names() {
  return {"rdqdstsh1", "rdmsh1", "rdpcsh1", "dqdbsh", "rdmh1", "rdmcmsh1"};
}

std::optional<std::size_t> Ambient::find(std::string_view key) const {
  auto it = std::find(keys_.begin(), keys_.end(), key);
  if (it == keys_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - keys_.begin());
}

std::size_t Ambient::index_of(std::string_view key) const {
  if (auto i = find(key)) return *i;
  throw InputError("'" + std::string(key) + "' is not a member of ambient " + name_);
}

SimpleMask Ambient::full_mask() const { return size() == 64 ? ~SimpleMask{0} : bit(size()) - 1; }

SimpleMask Ambient::mask_of(const std::vector<std::string>& keys) const {
  SimpleMask m = 0;
  for (const auto& k : keys) m |= bit(index_of(k));
  return m;
}

std::vector<std::string> Ambient::keys_of(SimpleMask m) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (m & bit(i)) out.push_back(keys_[i]);
  return out;
}

std::shared_ptr<const Ambient> Ambient::filtered(const Suite& s, std::string name) const {
  std::vector<std::string> keys;
  std::vector<FiniteAlgebra> algebras;
  for (std::size_t i = 0; i < size(); ++i) {
    if (satisfies_suite(simples_[i], s).holds()) {
      keys.push_back(keys_[i]);
      algebras.push_back(simples_[i]);
    }
  }
  return std::make_shared<const Ambient>(std::move(name), std::move(keys), std::move(algebras));
}

ClosedSimpleSet::ClosedSimpleSet(std::shared_ptr<const Ambient> ambient, SimpleMask mask)
    : ambient_(std::move(ambient)), mask_(mask) {
  if (!is_closed(*ambient_, mask_)) throw DomainError("set is not closed under subalgebras");
}

bool ClosedSimpleSet::contains(std::string_view key) const {
  auto i = ambient_->find(key);
  return i && (mask_ & bit(*i));
}

bool in_variety(const FiniteAlgebra& s, std::span<const FiniteAlgebra> gens) {
  if (!is_simple(s)) throw DomainError(s.name() + " is not simple");
  for (const auto& g : gens)
    if (!is_simple(g)) throw DomainError(g.name() + " is not simple");
  return std::any_of(gens.begin(), gens.end(), [&](const FiniteAlgebra& g) {
    return s.size() <= g.size() && !find_morphisms(s, g, MorphismKind::Embedding).empty();
  });
}

SimpleMask is_closure_mask(const Ambient& ambient, SimpleMask set) {
  SimpleMask out = set;
  for (std::size_t i = 0; i < ambient.size(); ++i)
    if (set & bit(i)) out |= ambient.sub_mask(i);
  return out;
}

ClosedSimpleSet is_closure(const std::shared_ptr<const Ambient>& ambient, const std::vector<std::string>& keys) {
  return ClosedSimpleSet(ambient, is_closure_mask(*ambient, ambient->mask_of(keys)));
}

bool is_closed(const Ambient& ambient, SimpleMask set) {
  if (set & ~ambient.full_mask()) return false;
  for (SimpleMask rest = set; rest; rest &= rest - 1) {
    auto i = static_cast<std::size_t>(std::countr_zero(rest));
    if (ambient.sub_mask(i) & ~set) return false;
  }
  return true;
}

std::uint64_t subvariety_count(const Ambient& ambient, unsigned jobs) {
  const std::size_t n = ambient.size();
  if (n > 40) throw DomainError("subvariety_count enumerates 2^n subsets; n is too large");
  // Shard on the top bits; each shard scans a contiguous block of subsets.
  const std::size_t shard_bits = std::min<std::size_t>(n, 6);
  const std::size_t shards = std::size_t{1} << shard_bits;
  const std::uint64_t per_shard = std::uint64_t{1} << (n - shard_bits);
  std::vector<std::uint64_t> partial(shards, 0);
  std::vector<SimpleMask> subs(n);
  for (std::size_t i = 0; i < n; ++i) subs[i] = ambient.sub_mask(i);
  parallel_for(shards, jobs, [&](std::size_t s) {
    std::uint64_t count = 0;
    const SimpleMask begin = static_cast<SimpleMask>(s) * per_shard;
    for (SimpleMask m = begin; m < begin + per_shard; ++m) {
      bool closed = true;
      for (SimpleMask rest = m; rest && closed; rest &= rest - 1) {
        closed = (subs[static_cast<std::size_t>(std::countr_zero(rest))] & ~m) == 0;
      }
      count += closed;
    }
    partial[s] = count;
  });
  std::uint64_t total = 0;
  for (auto c : partial) total += c;
  return total;
}

std::uint64_t ShapeSpec::cardinality() const {
  std::uint64_t c = 1;
  for (const auto& f : factors) c *= (std::uint64_t{1} << f.atoms) + (f.lifted ? 1 : 0);
  return c;
}

std::string ShapeSpec::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) out += " x ";
    const auto& f = factors[i];
    out += f.lifted ? "(1+B" + std::to_string(f.atoms) + ")" : "B" + std::to_string(f.atoms);
  }
  return out.empty() ? "1" : out;
}

ShapeSpec ShapeSpec::parse(std::string_view text) {
  ShapeSpec shape;
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '_') s += c;
  std::size_t i = 0;
  auto fail = [&] { throw InputError("cannot parse shape '" + std::string(text) + "'"); };
  auto number = [&] {
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i) fail();
    return std::stoi(s.substr(start, i - start));
  };
  while (i < s.size()) {
    Factor f;
    if (s.compare(i, 4, "(1+B") == 0) {
      i += 4;
      f.lifted = true;
      f.atoms = number();
      if (i >= s.size() || s[i] != ')') fail();
      ++i;
    } else if (s[i] == 'B') {
      ++i;
      f.atoms = number();
    } else {
      fail();
    }
    shape.factors.push_back(f);
    if (i < s.size()) {
      if (s[i] != 'x' && s[i] != '*') fail();
      ++i;
    }
  }
  if (shape.factors.empty()) fail();
  return shape;
}

bool ShapeSpec::same_factors(const ShapeSpec& other) const {
  auto a = factors;
  auto b = other.factors;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

DecompositionResult verify_decomposition(const Ambient& ambient, const ShapeSpec& shape, unsigned jobs) {
  DecompositionResult r;
  const std::size_t n = ambient.size();
  std::vector<SimpleMask> proper(n);
  for (std::size_t i = 0; i < n; ++i) proper[i] = ambient.sub_mask(i) & ~bit(i);
  for (std::size_t i = 0; i < n; ++i) {
    if (proper[i] == 0) continue;
    std::size_t j = static_cast<std::size_t>(std::countr_zero(proper[i]));
    if (std::popcount(proper[i]) != 1) {
      SimpleMask rest = proper[i] & ~bit(j);
      std::size_t k = static_cast<std::size_t>(std::countr_zero(rest));
      r.offending = std::make_pair(ambient.key(i), ambient.key(k));
      r.reason = ambient.key(i) + " has more than one proper subalgebra in the ambient";
      return r;
    }
    if (proper[j] != 0) {
      r.offending = std::make_pair(ambient.key(i), ambient.key(j));
      r.reason = "subalgebra chain of length two below " + ambient.key(i);
      return r;
    }
  }
  int isolated = 0;
  for (std::size_t m = 0; m < n; ++m) {
    if (proper[m] != 0) continue;
    int above = 0;
    for (std::size_t i = 0; i < n; ++i) above += proper[i] == bit(m);
    if (above > 0) r.derived.factors.push_back({true, above});
    else ++isolated;
  }
  if (isolated > 0) r.derived.factors.push_back({false, isolated});
  r.count = subvariety_count(ambient, jobs);
  if (!shape.same_factors(r.derived)) {
    r.reason = "preorder forces " + r.derived.to_string() + " (" + std::to_string(r.derived.cardinality()) +
               " subvarieties), not " + shape.to_string() + " (" + std::to_string(shape.cardinality()) + ")";
    return r;
  }
  if (shape.cardinality() != r.count) {
    r.reason = "cardinality " + std::to_string(shape.cardinality()) + " differs from enumerated count " +
               std::to_string(r.count);
    return r;
  }
  r.ok = true;
  return r;
}

namespace {

void require_same_ambient(const ClosedSimpleSet& a, const ClosedSimpleSet& b) {
  if (a.ambient_ptr() != b.ambient_ptr()) {
    throw InputError("subvarieties of different ambients: " + a.ambient().name() + " and " + b.ambient().name());
  }
}

}  // namespace

ClosedSimpleSet variety_meet(const ClosedSimpleSet& a, const ClosedSimpleSet& b) {
  require_same_ambient(a, b);
  return ClosedSimpleSet(a.ambient_ptr(), a.mask() & b.mask());
}

ClosedSimpleSet variety_join(const ClosedSimpleSet& a, const ClosedSimpleSet& b) {
  require_same_ambient(a, b);
  return ClosedSimpleSet(a.ambient_ptr(), is_closure_mask(a.ambient(), a.mask() | b.mask()));
}

}  // namespace shw
