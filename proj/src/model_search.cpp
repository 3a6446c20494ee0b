#include "shw/model_search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <numeric>
#include <stdexcept>

#include "shw/error.hpp"
#include "shw/parallel.hpp"
#include "shw/structure.hpp"

namespace shw {

namespace {

using Clock = std::chrono::steady_clock;
using Code = CompiledTerm::Code;

constexpr int kUnknown = -1;

/// Value of a partially evaluated term: a known element, or the first
/// unassigned cell the evaluation ran into.
struct Partial {
  int value;
  int block;
};

/// Cell layout: ' cells 0..n-1, then arrow cells n + x*n + y.
struct Tables {
  const FiniteAlgebra* lattice = nullptr;
  int n = 0;
  std::vector<int> cells;

  int neg_cell(int x) const { return x; }
  int arrow_cell(int x, int y) const { return n + x * n + y; }
};

struct CompiledIdentity {
  CompiledTerm lhs, rhs;
  int arity = 0;
};

struct Instance {
  int identity;
  std::vector<Elem> values;
};

Partial eval_partial(const Tables& t, const CompiledTerm& term, std::span<const Elem> values) {
  const auto& lat = *t.lattice;
  int stack[64];
  int* sp = stack;
  auto neg = [&](int x, int& out) {
    int v = t.cells[static_cast<std::size_t>(t.neg_cell(x))];
    if (v == kUnknown) return t.neg_cell(x);
    out = v;
    return kUnknown;
  };
  auto arrow = [&](int x, int y, int& out) {
    int v = t.cells[static_cast<std::size_t>(t.arrow_cell(x, y))];
    if (v == kUnknown) return t.arrow_cell(x, y);
    out = v;
    return kUnknown;
  };
  for (const auto& in : term.code()) {
    int block = kUnknown;
    switch (in.code) {
      case Code::Var: *sp++ = values[static_cast<std::size_t>(in.arg)]; break;
      case Code::Zero: *sp++ = lat.bot(); break;
      case Code::One: *sp++ = lat.top(); break;
      case Code::Join: --sp; sp[-1] = lat.join(sp[-1], sp[0]); break;
      case Code::Meet: --sp; sp[-1] = lat.meet(sp[-1], sp[0]); break;
      case Code::Arrow: --sp; block = arrow(sp[-1], sp[0], sp[-1]); break;
      case Code::Neg: block = neg(sp[-1], sp[-1]); break;
      case Code::Star: block = arrow(sp[-1], lat.bot(), sp[-1]); break;
      case Code::Plus:
        block = neg(sp[-1], sp[-1]);
        if (block == kUnknown) block = arrow(sp[-1], lat.bot(), sp[-1]);
        if (block == kUnknown) block = neg(sp[-1], sp[-1]);
        break;
      case Code::Iter:
        for (int k = 0; k < in.arg && block == kUnknown; ++k) {
          block = neg(sp[-1], sp[-1]);
          if (block == kUnknown) block = arrow(sp[-1], lat.bot(), sp[-1]);
        }
        break;
    }
    if (block != kUnknown) return {kUnknown, block};
  }
  return {stack[0], kUnknown};
}

enum class Truth { False, True, Unknown };

struct InstanceEval {
  Truth truth;
  int block;
};

class Searcher {
 public:
  Searcher(const SearchSpec& spec, const Tables& base, const std::vector<CompiledIdentity>& ids,
           const std::vector<Instance>& instances, const std::vector<int>& order,
           const std::vector<std::vector<int>>& domains, Clock::time_point deadline, bool timed,
           std::atomic<bool>& timed_out)
      : spec_(spec),
        t_(base),
        ids_(ids),
        instances_(instances),
        order_(order),
        domains_(domains),
        deadline_(deadline),
        timed_(timed),
        timed_out_(timed_out) {}

  InstanceEval eval(int k) const {
    const auto& inst = instances_[static_cast<std::size_t>(k)];
    const auto& id = ids_[static_cast<std::size_t>(inst.identity)];
    Partial l = eval_partial(t_, id.lhs, inst.values);
    if (l.value == kUnknown) return {Truth::Unknown, l.block};
    Partial r = eval_partial(t_, id.rhs, inst.values);
    if (r.value == kUnknown) return {Truth::Unknown, r.block};
    return {l.value == r.value ? Truth::True : Truth::False, kUnknown};
  }

  /// Places every instance on the watch list of its first blocking cell.
  /// False if some instance already fails.
  bool init_watches() {
    watch_.assign(t_.cells.size(), {});
    for (int k = 0; k < static_cast<int>(instances_.size()); ++k) {
      auto e = eval(k);
      if (e.truth == Truth::False) return false;
      if (e.truth == Truth::Unknown) watch_[static_cast<std::size_t>(e.block)].push_back(k);
    }
    return true;
  }

  /// Assigns `cell` and re-evaluates the instances watching it.
  bool assign(int cell, int value) {
    t_.cells[static_cast<std::size_t>(cell)] = value;
    auto& list = watch_[static_cast<std::size_t>(cell)];
    for (std::size_t p = 0; p < list.size();) {
      auto e = eval(list[p]);
      if (e.truth == Truth::False) return false;
      if (e.truth == Truth::Unknown) {
        watch_[static_cast<std::size_t>(e.block)].push_back(list[p]);
        list[p] = list.back();
        list.pop_back();
      } else {
        ++p;
      }
    }
    return true;
  }

  /// Sets a cell without propagation (used for domain filtering).
  void set(int cell, int value) { t_.cells[static_cast<std::size_t>(cell)] = value; }
  void unassign(int cell) { t_.cells[static_cast<std::size_t>(cell)] = kUnknown; }

  void run(std::size_t depth) {
    if (stop_) return;
    if ((++nodes_ & 1023) == 0 && timed_) {
      if (timed_out_.load() || Clock::now() > deadline_) {
        timed_out_.store(true);
        stop_ = true;
        return;
      }
    }
    if (depth == order_.size()) {
      leaf();
      return;
    }
    const int cell = order_[depth];
    for (int v : domains_[static_cast<std::size_t>(cell)]) {
      if (assign(cell, v)) run(depth + 1);
      unassign(cell);
      if (stop_) return;
    }
  }

  std::vector<std::vector<int>> found;
  std::uint64_t nodes() const { return nodes_; }

 private:
  void leaf() {
    const auto& lat = *t_.lattice;
    const int n = t_.n;
    FiniteAlgebra alg =
        lat.with_arrow(BinaryTable(static_cast<std::size_t>(n), std::vector<Elem>(t_.cells.begin() + n, t_.cells.end())));
    const bool has_neg = t_.cells[0] != kUnknown;
    if (has_neg) alg = alg.with_neg(std::vector<Elem>(t_.cells.begin(), t_.cells.begin() + n));
    for (const auto& q : spec_.required.quasi)
      if (!satisfies_quasi(alg, q).holds) return;
    for (const auto& f : spec_.forbidden)
      if (satisfies(alg, f).holds) return;
    for (const auto& id : spec_.required.identities) {
      if (!satisfies(alg, id).holds) {
        throw std::logic_error("search emitted a table failing " + id.label + "; propagation is unsound");
      }
    }
    found.push_back(t_.cells);
    if (spec_.limit && found.size() >= *spec_.limit) stop_ = true;
  }

  const SearchSpec& spec_;
  Tables t_;
  const std::vector<CompiledIdentity>& ids_;
  const std::vector<Instance>& instances_;
  const std::vector<int>& order_;
  const std::vector<std::vector<int>>& domains_;
  std::vector<std::vector<int>> watch_;
  Clock::time_point deadline_;
  bool timed_;
  std::atomic<bool>& timed_out_;
  bool stop_ = false;
  std::uint64_t nodes_ = 0;
};

/// Sort key: ' table (if any) followed by the arrow table row by row.
std::vector<int> solution_key(const FiniteAlgebra& a) {
  std::vector<int> key;
  if (a.has_neg()) key = *a.neg_table();
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y) key.push_back(a.arrow(static_cast<Elem>(x), static_cast<Elem>(y)));
  return key;
}

std::vector<int> transformed_key(const FiniteAlgebra& a, const std::vector<Elem>& s) {
  const std::size_t n = a.size();
  std::vector<int> neg, arrow(n * n);
  if (a.has_neg()) {
    neg.resize(n);
    for (std::size_t x = 0; x < n; ++x) neg[static_cast<std::size_t>(s[x])] = s[static_cast<std::size_t>(a.neg(static_cast<Elem>(x)))];
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      arrow[static_cast<std::size_t>(s[x]) * n + static_cast<std::size_t>(s[y])] =
          s[static_cast<std::size_t>(a.arrow(static_cast<Elem>(x), static_cast<Elem>(y)))];
  neg.insert(neg.end(), arrow.begin(), arrow.end());
  return neg;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::vector<FiniteAlgebra> SearchResult::algebras() const {
  std::vector<FiniteAlgebra> out;
  for (const auto& s : solutions) out.push_back(s.algebra);
  return out;
}

SearchResult enumerate_algebras(const SearchSpec& spec) {
  const auto start = Clock::now();
  const FiniteAlgebra lattice = spec.lattice.lattice_reduct();
  if (!validate_lattice(lattice).ok()) {
    throw InputError("search lattice " + lattice.name() + " is not a bounded distributive lattice");
  }
  const int n = static_cast<int>(lattice.size());
  bool uses_neg = spec.required.needs_neg();
  for (const auto& f : spec.forbidden) uses_neg = uses_neg || f.uses_neg();

  Tables base{&lattice, n, std::vector<int>(static_cast<std::size_t>(n + n * n), kUnknown)};

  std::vector<CompiledIdentity> ids;
  std::vector<Instance> instances;
  for (const auto& id : spec.required.identities) {
    if (id.uses_neg() && !uses_neg) throw InputError("internal: neg use not detected");
    const auto vars = id.variables();
    ids.push_back({CompiledTerm(id.equation_lhs(), vars), CompiledTerm(id.equation_rhs(), vars),
                   static_cast<int>(vars.size())});
    const int k = static_cast<int>(vars.size());
    std::vector<Elem> values(static_cast<std::size_t>(k), 0);
    for (;;) {
      instances.push_back({static_cast<int>(ids.size() - 1), values});
      int pos = k - 1;
      while (pos >= 0 && ++values[static_cast<std::size_t>(pos)] == n) values[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
    }
  }

  std::vector<int> order;
  if (uses_neg)
    for (int x = 0; x < n; ++x) order.push_back(base.neg_cell(x));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      order.push_back(spec.order == CellOrder::RowMajor ? base.arrow_cell(p, q) : base.arrow_cell(q, p));

  std::atomic<bool> timed_out{false};
  const bool timed = spec.timeout_seconds > 0;
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timed ? spec.timeout_seconds : 0));

  // Single-cell filtering: drop values that alone already falsify an instance.
  std::vector<std::vector<int>> domains(base.cells.size());
  {
    Searcher probe(spec, base, ids, instances, order, domains, deadline, timed, timed_out);
    for (int cell : order) {
      for (int v = 0; v < n; ++v) {
        probe.set(cell, v);
        bool ok = true;
        for (int k = 0; k < static_cast<int>(instances.size()) && ok; ++k) ok = probe.eval(k).truth != Truth::False;
        probe.unassign(cell);
        if (ok) domains[static_cast<std::size_t>(cell)].push_back(v);
      }
    }
  }

  SearchResult result;
  std::vector<std::vector<int>> found;
  const int first = order.front();
  const auto& first_domain = domains[static_cast<std::size_t>(first)];
  std::vector<std::vector<std::vector<int>>> shard_found(first_domain.size());
  std::vector<std::uint64_t> shard_nodes(first_domain.size(), 0);
  auto run_shard = [&](std::size_t s) {
    Searcher searcher(spec, base, ids, instances, order, domains, deadline, timed, timed_out);
    if (!searcher.init_watches()) return;
    if (searcher.assign(first, first_domain[s])) searcher.run(1);
    shard_found[s] = std::move(searcher.found);
    shard_nodes[s] = searcher.nodes();
  };
  if (spec.jobs <= 1) {
    std::size_t total = 0;
    for (std::size_t s = 0; s < first_domain.size(); ++s) {
      run_shard(s);
      total += shard_found[s].size();
      if ((spec.limit && total >= *spec.limit) || timed_out.load()) break;
    }
  } else {
    parallel_for(first_domain.size(), spec.jobs, run_shard);
  }
  for (std::size_t s = 0; s < first_domain.size(); ++s) {
    result.nodes += shard_nodes[s];
    for (auto& f : shard_found[s]) found.push_back(std::move(f));
  }
  if (spec.limit && found.size() >= *spec.limit) {
    result.truncated = true;
    found.resize(*spec.limit);
  }
  result.inconclusive = timed_out.load();

  std::vector<std::pair<std::vector<int>, FiniteAlgebra>> keyed;
  for (const auto& cells : found) {
    FiniteAlgebra alg =
        lattice.with_arrow(BinaryTable(static_cast<std::size_t>(n), std::vector<Elem>(cells.begin() + n, cells.end())));
    if (uses_neg) alg = alg.with_neg(std::vector<Elem>(cells.begin(), cells.begin() + n));
    keyed.emplace_back(solution_key(alg), std::move(alg));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& l, const auto& r) { return l.first < r.first; });

  std::vector<std::vector<Elem>> autos;
  for (auto& m : automorphisms(lattice)) autos.push_back(std::move(m.image));
  std::map<std::vector<int>, std::size_t> seen;
  for (std::size_t k = 0; k < keyed.size(); ++k) {
    auto& alg = keyed[k].second;
    std::vector<int> canon = keyed[k].first;
    for (const auto& s : autos) canon = std::min(canon, transformed_key(alg, s));
    SearchSolution sol{alg.renamed(spec.name_prefix + std::to_string(k + 1)), std::nullopt};
    auto [it, fresh] = seen.emplace(canon, k);
    if (!fresh) sol.duplicate_of = it->second;
    result.solutions.push_back(std::move(sol));
  }
  result.seconds = seconds_since(start);
  return result;
}

std::vector<FiniteAlgebra> distributive_lattices(int size) {
  std::vector<FiniteAlgebra> out;
  if (size < 2) return out;
  const int m = size - 2;  // middle elements are 1..m, top is size - 1
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) pairs.emplace_back(i, j);

  std::vector<std::string> labels{"0"};
  for (int i = 0; i < m; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
  labels.push_back("1");

  // Every poset has a linear extension, so orders compatible with the index
  // order already meet every isomorphism class; the canonical form is the
  // least full-relation bitmask over relabellings of the middle elements.
  auto full_mask = [&](const std::vector<std::vector<bool>>& leq, const std::vector<int>& perm) {
    std::uint64_t mask = 0;
    int bit = 0;
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= m; ++j) {
        if (i == j) continue;
        if (leq[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])][static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])])
          mask |= std::uint64_t{1} << bit;
        ++bit;
      }
    return mask;
  };

  std::map<std::uint64_t, FiniteAlgebra> classes;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << pairs.size()); ++subset) {
    std::vector<std::vector<bool>> leq(static_cast<std::size_t>(size), std::vector<bool>(static_cast<std::size_t>(size), false));
    for (int x = 0; x < size; ++x) {
      leq[0][static_cast<std::size_t>(x)] = true;
      leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(size - 1)] = true;
      leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(x)] = true;
    }
    for (std::size_t p = 0; p < pairs.size(); ++p)
      if (subset & (std::uint64_t{1} << p)) leq[static_cast<std::size_t>(pairs[p].first)][static_cast<std::size_t>(pairs[p].second)] = true;
    bool transitive = true;
    for (int x = 0; x < size && transitive; ++x)
      for (int y = 0; y < size && transitive; ++y)
        for (int z = 0; z < size && transitive; ++z)
          if (leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] && leq[static_cast<std::size_t>(y)][static_cast<std::size_t>(z)] &&
              !leq[static_cast<std::size_t>(x)][static_cast<std::size_t>(z)])
            transitive = false;
    if (!transitive) continue;

    std::vector<int> perm(static_cast<std::size_t>(size));
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t canon = full_mask(leq, perm);
    while (std::next_permutation(perm.begin() + 1, perm.end() - 1)) canon = std::min(canon, full_mask(leq, perm));
    if (classes.count(canon)) continue;
    try {
      FiniteAlgebra lat = lattice_from_order("DL" + std::to_string(size) + "_" + std::to_string(classes.size() + 1), labels, leq);
      if (!validate_lattice(lat).ok()) continue;
      classes.emplace(canon, std::move(lat));
    } catch (const StructuralError&) {
      continue;
    }
  }
  int k = 0;
  for (auto& [canon, lat] : classes) out.push_back(lat.renamed("DL" + std::to_string(size) + "_" + std::to_string(++k)));
  return out;
}

StoneCheckReport exhaustive_stone_check(int max_size, unsigned jobs, double timeout_seconds) {
  if (max_size > 7) throw DomainError("exhaustive_stone_check is limited to lattices of size <= 7");
  const auto& lib = SuiteLibrary::builtin();
  const Suite required = lib.combine({"SH", "DQD", "DM", "L1", "R"}, "SH+DQD+DM+L1+R");
  const Identity& stone = lib.get("St").identities.front();
  StoneCheckReport report;
  report.max_size = max_size;
  report.lattices_per_size.assign(static_cast<std::size_t>(std::max(max_size, 0) + 1), 0);
  for (int size = 2; size <= max_size; ++size) {
    const auto lattices = distributive_lattices(size);
    report.lattices_per_size[static_cast<std::size_t>(size)] = lattices.size();
    for (const auto& lat : lattices) {
      SearchSpec spec{lat, required, {}, std::nullopt, timeout_seconds, CellOrder::RowMajor, jobs, lat.name() + "_"};
      auto res = enumerate_algebras(spec);
      report.inconclusive = report.inconclusive || res.inconclusive;
      for (const auto& sol : res.solutions) {
        ++report.algebras_checked;
        auto check = satisfies(sol.algebra, stone);
        if (!check.holds) report.violators.push_back({sol.algebra, check});
      }
    }
  }
  return report;
}

CounterexampleResult find_stone_counterexample_level2(const FiniteAlgebra& lattice, double timeout_seconds,
                                                      unsigned jobs) {
  const auto& lib = SuiteLibrary::builtin();
  SearchSpec spec{lattice,
                  lib.combine({"SH", "DQD", "DM", "L2", "R"}, "SH+DQD+DM+L2+R"),
                  lib.get("St").identities,
                  std::size_t{1},
                  timeout_seconds,
                  CellOrder::RowMajor,
                  jobs,
                  lattice.name() + "_level2_"};
  auto res = enumerate_algebras(spec);
  CounterexampleResult out;
  out.inconclusive = res.inconclusive && res.solutions.empty();
  out.nodes = res.nodes;
  out.seconds = res.seconds;
  if (!res.solutions.empty()) out.algebra = res.solutions.front().algebra;
  return out;
}

}  // namespace shw
