#include "shw/conformance.hpp"

#include <algorithm>
#include <set>

#include "shw/catalog.hpp"
#include "shw/error.hpp"
#include "shw/parallel.hpp"

namespace shw {

namespace {

bool in(const std::vector<std::string>& v, const std::string& k) { return std::find(v.begin(), v.end(), k) != v.end(); }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    auto b = cur.find_first_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, cur.find_last_not_of(" \t") - b + 1));
    cur.clear();
  };
  for (char c : text) {
    if (c == ',') flush();
    else cur += c;
  }
  flush();
  return out;
}

template <class Row, class Fn>
std::vector<Row> over_family(const std::string& family, unsigned jobs, Fn fn) {
  const auto& keys = catalog::family(family);
  std::vector<Row> rows(keys.size());
  parallel_for(keys.size(), jobs, [&](std::size_t i) { rows[i] = fn(keys[i]); });
  return rows;
}

}  // namespace

std::vector<const SuiteCheck*> CatalogConformance::unexpected_failures() const {
  std::vector<const SuiteCheck*> out;
  for (const auto& c : checks)
    if (c.expected && !c.report.holds()) out.push_back(&c);
  return out;
}

CatalogConformance catalog_conformance() {
  const auto& lib = SuiteLibrary::builtin();
  const auto& dm = catalog::family("C10dm");
  const auto& dp = catalog::family("C10dp");
  const std::vector<std::string> boolean = {"D1", "D2", "D3"};
  CatalogConformance out;
  for (const auto& key : catalog::family("RDQDStSH1")) {
    const auto& a = catalog::get(key);
    const bool involutive = in(dm, key) || key == "2e" || key == "2bare" || in(boolean, key);
    const std::vector<std::pair<std::string, bool>> plan = {
        {"DQD", true}, {"St", true}, {"L1", true}, {"R", true}, {"DM", involutive}, {"PC", in(dp, key)},
        {"Bo", in(boolean, key)}};
    for (const auto& [suite, expected] : plan) {
      if (!expected) continue;
      out.checks.push_back({key, suite, true, satisfies_suite(a, lib.get(suite))});
    }
  }
  return out;
}

std::vector<const SuiteCheck*> LemmaReport::violations() const {
  std::vector<const SuiteCheck*> out;
  for (const auto& c : checks)
    if (!c.report.holds()) out.push_back(&c);
  return out;
}

LemmaReport run_lemma_suite(unsigned jobs) {
  const auto& lib = SuiteLibrary::builtin();
  std::vector<std::pair<std::string, std::string>> plan;
  for (const auto& key : catalog::family("RDQDStSH1")) plan.emplace_back(key, "DQD-lemmas");
  for (const auto& key : catalog::family("RDMSH1")) plan.emplace_back(key, "regular-lemmas");
  LemmaReport out;
  out.checks.resize(plan.size());
  parallel_for(plan.size(), jobs, [&](std::size_t i) {
    const auto& [key, suite] = plan[i];
    out.checks[i] = {key, suite, true, satisfies_suite(catalog::get(key), lib.get(suite))};
  });
  for (const auto& c : out.checks) out.statements_checked += c.report.entries.size();
  return out;
}

std::vector<BaseEntry> base_library() {
  const auto& lib = SuiteLibrary::builtin();
  std::vector<BaseEntry> out;
  for (const auto& name : lib.names()) {
    const Suite& s = lib.get(name);
    const std::string* ambient = s.meta_value("ambient");
    if (!ambient) continue;
    const std::string* gens = s.meta_value("generators");
    const std::string* check = s.meta_value("check");
    BaseEntry e{name, s.about, *ambient, s, {}, check && *check == "hand"};
    // A generator item is a catalog key or a family name.
    for (const auto& g : gens ? split_list(*gens) : std::vector<std::string>{}) {
      const auto families = catalog::family_names();
      if (std::find(families.begin(), families.end(), g) != families.end()) {
        for (const auto& k : catalog::family(g)) e.generators.push_back(k);
      } else if (catalog::contains(g)) {
        e.generators.push_back(g);
      } else {
        throw InputError("base " + name + " names unknown generator " + g);
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::size_t ConformanceTable::passes() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const BaseCheck& r) { return r.pass(); }));
}

std::vector<const BaseCheck*> ConformanceTable::hand_verified_failures() const {
  std::vector<const BaseCheck*> out;
  for (const auto& r : rows)
    if (r.entry.hand_verified && !r.pass()) out.push_back(&r);
  return out;
}

ConformanceTable verify_bases(unsigned jobs) {
  const auto entries = base_library();
  ConformanceTable table;
  table.rows.resize(entries.size());
  // Build shared ambients up front; the embedding searches are not repeated per row.
  std::map<std::string, std::shared_ptr<const Ambient>> ambients;
  for (const auto& e : entries)
    if (!ambients.count(e.ambient)) ambients.emplace(e.ambient, Ambient::named(e.ambient));

  parallel_for(entries.size(), jobs, [&](std::size_t r) {
    const auto& e = entries[r];
    const auto& amb = ambients.at(e.ambient);
    BaseCheck row;
    row.entry = e;
    SimpleMask sat = 0;
    std::vector<std::string> first_failure(amb->size()), first_witness(amb->size());
    for (std::size_t i = 0; i < amb->size(); ++i) {
      auto rep = satisfies_suite(amb->algebra(i), e.base);
      if (rep.holds()) {
        sat |= SimpleMask{1} << i;
      } else {
        const auto* f = rep.failures().front();
        first_failure[i] = f->label;
        first_witness[i] = f->result.witness_text(amb->algebra(i));
      }
    }
    std::vector<std::string> present;
    for (const auto& g : e.generators) {
      if (amb->find(g)) present.push_back(g);
      else row.failing.push_back({g, "(generator)", "not a member of ambient " + e.ambient});
    }
    const SimpleMask expected = is_closure_mask(*amb, amb->mask_of(present));
    row.sat = amb->keys_of(sat);
    row.expected = amb->keys_of(expected);
    row.sat_closed = is_closed(*amb, sat);
    for (std::size_t i = 0; i < amb->size(); ++i) {
      const SimpleMask bit = SimpleMask{1} << i;
      if ((expected & bit) && !(sat & bit)) row.failing.push_back({amb->key(i), first_failure[i], first_witness[i]});
      if ((sat & bit) && !(expected & bit)) row.unexpected.push_back({amb->key(i), present});
    }
    table.rows[r] = std::move(row);
  });
  return table;
}

std::vector<SimplicityRow> simplicity_table(unsigned jobs) {
  return over_family<SimplicityRow>("RDQDStSH1", jobs, [](const std::string& key) {
    const auto& a = catalog::get(key);
    SimplicityRow row;
    row.algebra = key;
    row.congruences = congruence_lattice(a).size();
    const auto subs = all_subalgebras(a);
    row.subalgebras = subs.size();
    for (const auto& s : subs) {
      auto sub = induced_subalgebra(a, s);
      const bool simple = is_simple(sub);
      row.subalgebras_simple = row.subalgebras_simple && simple;
      row.simple_iff_si = row.simple_iff_si && (simple == is_subdirectly_irreducible(sub));
    }
    return row;
  });
}

PrimalityComparison primality_comparison(unsigned jobs) {
  PrimalityComparison out;
  out.rows = over_family<PrimalityRow>("RDQDStSH1", jobs, [](const std::string& key) {
    return PrimalityRow{key, classify_primality(catalog::get(key))};
  });
  const std::vector<std::string> base = {"2e", "2bare", "D3"};
  auto reading = [&](std::string name, std::vector<std::string> schemes) {
    PrimalityReading r;
    r.name = std::move(name);
    r.claimed_primal = base;
    for (const auto& s : schemes)
      for (int i = 5; i <= 8; ++i) r.claimed_primal.push_back("L" + std::to_string(i) + s);
    std::set<std::string> computed;
    for (const auto& row : out.rows) {
      const bool claimed = in(r.claimed_primal, row.algebra);
      const bool primal = row.report.kind == Primality::Primal;
      if (primal) computed.insert(row.algebra);
      if (claimed != primal) r.primal_mismatch.push_back(row.algebra);
      if (!claimed && row.report.kind != Primality::Semiprimal) r.not_semiprimal.push_back(row.algebra);
    }
    r.primal_set_matches = r.primal_mismatch.empty();
    return r;
  };
  out.readings.push_back(reading("dm only", {"dm"}));
  out.readings.push_back(reading("dm and dp", {"dm", "dp"}));
  return out;
}

std::vector<CepRow> cep_table(unsigned jobs) {
  return over_family<CepRow>("RDQDStSH1", jobs, [](const std::string& key) {
    return CepRow{key, has_cep(catalog::get(key))};
  });
}

}  // namespace shw
