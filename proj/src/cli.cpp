#include "shw/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <sstream>

#include "shw/amalgamation.hpp"
#include "shw/catalog.hpp"
#include "shw/conformance.hpp"
#include "shw/error.hpp"
#include "shw/model_search.hpp"
#include "shw/structure.hpp"
#include "shw/varieties.hpp"

namespace shw::cli {

namespace {

constexpr double kDefaultTimeout = 300.0;

struct Globals {
  bool json = false;
  unsigned jobs = 1;
  std::uint64_t seed = 20240601;
  std::optional<double> timeout;
};

json envelope(std::string_view kind) { return json{{"schema", "shw." + std::string(kind) + "/1"}}; }

std::vector<std::string> split(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    const auto b = cur.find_first_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, cur.find_last_not_of(" \t") - b + 1));
    cur.clear();
  };
  for (char c : text) {
    if (c == sep) flush();
    else cur += c;
  }
  flush();
  return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? std::string(sep) : "") + items[i];
  return out;
}

/// A catalog key, or a path to an algebra JSON file.
FiniteAlgebra load_algebra(const std::string& ref) {
  if (catalog::contains(ref)) return catalog::get(ref);
  if (std::filesystem::exists(ref)) return load_algebra_file(ref);
  throw InputError("unknown algebra '" + ref + "' (neither a catalog key nor a file)");
}

double resolve_timeout(const Globals& g) {
  if (g.timeout) return *g.timeout;
  if (const char* env = std::getenv("SHW_TIMEOUT")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0') throw InputError(std::string("SHW_TIMEOUT is not a number: ") + env);
    return v;
  }
  return kDefaultTimeout;
}

std::string set_text(const FiniteAlgebra& a, const ElemSet& s) {
  std::vector<std::string> labels;
  for (Elem x : s) labels.push_back(a.label(x));
  return "{" + join(labels) + "}";
}

std::string map_text(const FiniteAlgebra& from, const FiniteAlgebra& to, const std::vector<Elem>& image) {
  std::vector<std::string> parts;
  for (std::size_t x = 0; x < image.size(); ++x)
    parts.push_back(from.label(static_cast<Elem>(x)) + "->" + to.label(image[x]));
  return "[" + join(parts) + "]";
}

std::string tables_text(const FiniteAlgebra& a) {
  std::ostringstream out;
  std::size_t w = 1;
  for (const auto& l : a.labels()) w = std::max(w, l.size());
  auto cell = [&](const std::string& s) {
    std::ostringstream c;
    c << std::setw(static_cast<int>(w)) << s;
    return c.str();
  };
  out << a.name() << " (" << a.size() << " elements: " << join(a.labels(), " ") << ")\n";
  auto table = [&](const char* op, auto f) {
    out << "  " << cell(op) << " |";
    for (const auto& l : a.labels()) out << " " << cell(l);
    out << "\n";
    for (std::size_t x = 0; x < a.size(); ++x) {
      out << "  " << cell(a.labels()[x]) << " |";
      for (std::size_t y = 0; y < a.size(); ++y) out << " " << cell(a.label(f(static_cast<Elem>(x), static_cast<Elem>(y))));
      out << "\n";
    }
  };
  if (a.has_arrow()) table("->", [&](Elem x, Elem y) { return a.arrow(x, y); });
  if (a.has_neg()) {
    out << "  '  :";
    for (std::size_t x = 0; x < a.size(); ++x) out << " " << a.labels()[x] << "'=" << a.label(a.neg(static_cast<Elem>(x)));
    out << "\n";
  }
  return out.str();
}

json check_json(const CheckResult& r, const FiniteAlgebra& a) {
  json j{{"holds", r.holds}};
  if (!r.holds) {
    json w = json::object();
    for (std::size_t i = 0; i < r.witness.size(); ++i) w[r.variables[i]] = a.label(r.witness[i]);
    j["witness"] = w;
  }
  return j;
}

json suite_report_json(const SuiteReport& rep, const FiniteAlgebra& a) {
  json entries = json::array();
  for (const auto& e : rep.entries) {
    json j{{"label", e.label}, {"statement", e.source}};
    j.update(check_json(e.result, a));
    entries.push_back(j);
  }
  return json{{"suite", rep.suite}, {"algebra", rep.algebra}, {"holds", rep.holds()}, {"entries", entries}};
}

void suite_report_text(std::ostream& out, const SuiteReport& rep, const FiniteAlgebra& a) {
  for (const auto& e : rep.entries) {
    out << (e.result.holds ? "PASS " : "FAIL ") << e.label << ": " << e.source;
    if (!e.result.holds) out << "  witness " << e.result.witness_text(a);
    out << "\n";
  }
}

// ---------------------------------------------------------------- catalog

CommandResult catalog_list(const Globals&) {
  CommandResult r;
  std::ostringstream out;
  json list = json::array();
  const auto families = catalog::family_names();
  for (const auto& key : catalog::keys()) {
    const auto& a = catalog::get(key);
    std::vector<std::string> in;
    for (const auto& f : families) {
      const auto& m = catalog::family(f);
      if (std::find(m.begin(), m.end(), key) != m.end()) in.push_back(f);
    }
    std::string ops = std::string(a.has_arrow() ? "->" : "") + (a.has_neg() ? " '" : "");
    out << std::left << std::setw(14) << key << std::setw(3) << a.size() << std::setw(6) << ops << join(in) << "\n";
    list.push_back(json{{"key", key}, {"size", a.size()}, {"arrow", a.has_arrow()}, {"neg", a.has_neg()}, {"families", in}});
  }
  r.text = out.str();
  json p = envelope("catalog-list");
  p["algebras"] = list;
  r.payload = p;
  return r;
}

CommandResult catalog_export(const std::string& key, const std::string& out_path) {
  CommandResult r;
  const auto& a = catalog::get(key);
  json j = algebra_to_json(a);
  if (!out_path.empty()) {
    save_algebra_file(a, out_path);
    r.text = "wrote " + out_path + "\n";
  } else {
    r.text = j.dump(2) + "\n";
  }
  r.payload = j;
  return r;
}

// ---------------------------------------------------------------- eval / check

CommandResult eval_cmd(const std::string& ref, const std::string& src, const std::string& assign) {
  const FiniteAlgebra a = load_algebra(ref);
  const Term t = parse_term(src);
  Assignment env;
  json jenv = json::object();
  for (const auto& item : split(assign)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("assignment '" + item + "' is not of the form x=label");
    const auto var_part = split(item.substr(0, eq));
    const auto label_part = split(item.substr(eq + 1));
    if (var_part.size() != 1 || label_part.size() != 1) throw InputError("assignment '" + item + "' is malformed");
    const std::string& var = var_part[0];
    const std::string& label = label_part[0];
    env[var] = a.index_of(label);
    jenv[var] = label;
  }
  const Elem v = eval(a, t, env);
  CommandResult r;
  r.text = a.label(v) + "\n";
  json p = envelope("eval");
  p["algebra"] = a.name();
  p["term"] = pretty(t);
  p["assignment"] = jenv;
  p["value"] = a.label(v);
  r.payload = p;
  return r;
}

CommandResult check_cmd(const std::string& ref, const std::vector<std::string>& suites,
                        const std::vector<std::string>& identities, const std::string& suite_file) {
  const FiniteAlgebra a = load_algebra(ref);
  Suite suite{"check", {}, {}, {}, {}};
  std::optional<SuiteLibrary> extra;
  if (!suite_file.empty()) extra = SuiteLibrary::load_file(suite_file);
  for (const auto& item : suites) {
    for (const auto& name : split(item)) {
      const Suite& s = extra && extra->contains(name) ? extra->get(name) : SuiteLibrary::builtin().get(name);
      suite.identities.insert(suite.identities.end(), s.identities.begin(), s.identities.end());
      suite.quasi.insert(suite.quasi.end(), s.quasi.begin(), s.quasi.end());
    }
  }
  if (!identities.empty()) {
    Suite ids = resolve_suite_spec(identities, "identities");
    suite.identities.insert(suite.identities.end(), ids.identities.begin(), ids.identities.end());
    suite.quasi.insert(suite.quasi.end(), ids.quasi.begin(), ids.quasi.end());
  }
  if (suite.size() == 0) throw InputError("check needs --suite or --identity");
  const auto rep = satisfies_suite(a, suite);
  CommandResult r;
  std::ostringstream out;
  suite_report_text(out, rep, a);
  out << (rep.holds() ? "holds" : "fails") << " on " << a.name() << "\n";
  r.text = out.str();
  json p = envelope("check");
  p.update(suite_report_json(rep, a));
  r.payload = p;
  r.exit_code = rep.holds() ? kHolds : kFails;
  return r;
}

// ---------------------------------------------------------------- structure

CommandResult structure_cmd(const std::string& what, const std::string& ref) {
  const FiniteAlgebra a = load_algebra(ref);
  CommandResult r;
  std::ostringstream out;
  json p = envelope("structure-" + what);
  p["algebra"] = a.name();
  if (what == "subs") {
    json list = json::array();
    for (const auto& s : all_subalgebras(a)) {
      out << set_text(a, s) << "\n";
      json labels = json::array();
      for (Elem x : s) labels.push_back(a.label(x));
      list.push_back(labels);
    }
    p["subalgebras"] = list;
  } else if (what == "cons") {
    json list = json::array();
    for (const auto& c : congruence_lattice(a)) {
      std::vector<std::string> blocks;
      json jb = json::array();
      for (const auto& b : c.blocks()) {
        blocks.push_back(set_text(a, b));
        json labels = json::array();
        for (Elem x : b) labels.push_back(a.label(x));
        jb.push_back(labels);
      }
      out << join(blocks, " ") << "\n";
      list.push_back(jb);
    }
    p["congruences"] = list;
  } else if (what == "autos") {
    json list = json::array();
    for (const auto& m : automorphisms(a)) {
      out << map_text(a, a, m.image) << "\n";
      list.push_back(labelled_map(a, a, m.image));
    }
    p["automorphisms"] = list;
  } else {
    const bool cep = has_cep(a);
    out << "CEP " << (cep ? "holds" : "fails") << " on " << a.name() << "\n";
    p["cep"] = cep;
    r.exit_code = cep ? kHolds : kFails;
  }
  r.text = out.str();
  r.payload = p;
  return r;
}

CommandResult simple_cmd(const std::string& ref) {
  const FiniteAlgebra a = load_algebra(ref);
  const auto cons = congruence_lattice(a);
  const bool simple = is_simple(a);
  const bool si = is_subdirectly_irreducible(a);
  const bool di = is_directly_indecomposable(a);
  CommandResult r;
  std::ostringstream out;
  out << a.name() << ": " << cons.size() << " congruences; simple " << (simple ? "yes" : "no")
      << "; subdirectly irreducible " << (si ? "yes" : "no") << "; directly indecomposable " << (di ? "yes" : "no")
      << "\n";
  r.text = out.str();
  json p = envelope("simple");
  p["algebra"] = a.name();
  p["congruences"] = cons.size();
  p["simple"] = simple;
  p["subdirectly_irreducible"] = si;
  p["directly_indecomposable"] = di;
  r.payload = p;
  r.exit_code = simple ? kHolds : kFails;
  return r;
}

json primality_json(const FiniteAlgebra& a, const PrimalityReport& rep) {
  json iso = json::array();
  for (const auto& m : rep.nontrivial_internal_isos) {
    json pairs = json::object();
    for (const auto& [x, y] : m) pairs[a.label(x)] = a.label(y);
    iso.push_back(pairs);
  }
  return json{{"algebra", a.name()},
              {"kind", std::string(primality_name(rep.kind))},
              {"subalgebras", rep.subalgebra_count},
              {"automorphisms", rep.automorphism_count},
              {"subalgebras_simple", rep.subalgebras_simple},
              {"square_subuniverses", rep.square_subuniverses},
              {"irregular_square_subuniverses", rep.irregular.size()},
              {"nontrivial_internal_isomorphisms", iso}};
}

CommandResult primality_cmd(const std::string& ref) {
  const FiniteAlgebra a = load_algebra(ref);
  const auto rep = classify_primality(a);
  CommandResult r;
  std::ostringstream out;
  out << a.name() << ": " << primality_name(rep.kind) << " (" << rep.subalgebra_count << " subalgebras, "
      << rep.automorphism_count << " automorphisms, " << rep.square_subuniverses << " subuniverses of the square, "
      << rep.nontrivial_internal_isos.size() << " non-identity internal isomorphisms)\n";
  r.text = out.str();
  json p = envelope("primality");
  p.update(primality_json(a, rep));
  r.payload = p;
  return r;
}

// ---------------------------------------------------------------- verify

CommandResult verify_catalog() {
  const auto rep = catalog_conformance();
  CommandResult r;
  std::ostringstream out;
  json rows = json::array();
  for (const auto& c : rep.checks) {
    const auto& a = catalog::get(c.algebra);
    out << (c.report.holds() ? "PASS " : "FAIL ") << c.algebra << " " << c.suite;
    if (!c.report.holds()) {
      const auto* f = c.report.failures().front();
      out << "  " << f->label << " witness " << f->result.witness_text(a);
    }
    out << "\n";
    rows.push_back(suite_report_json(c.report, a));
  }
  out << rep.checks.size() << " checks, " << rep.unexpected_failures().size() << " failures\n";
  r.text = out.str();
  json p = envelope("verify-catalog");
  p["checks"] = rows;
  p["ok"] = rep.ok();
  r.payload = p;
  r.exit_code = rep.ok() ? kHolds : kFails;
  return r;
}

CommandResult verify_lemmas(const Globals& g) {
  const auto rep = run_lemma_suite(g.jobs);
  CommandResult r;
  std::ostringstream out;
  json rows = json::array();
  for (const auto& c : rep.checks) {
    const auto& a = catalog::get(c.algebra);
    for (const auto& e : c.report.entries) {
      if (e.result.holds) continue;
      out << "FAIL " << c.algebra << " " << e.label << ": " << e.source << "  witness " << e.result.witness_text(a)
          << "\n";
    }
    rows.push_back(suite_report_json(c.report, a));
  }
  out << rep.checks.size() << " (algebra, suite) pairs, " << rep.statements_checked << " statements checked, "
      << rep.violations().size() << " with violations\n";
  r.text = out.str();
  json p = envelope("verify-lemmas");
  p["statements_checked"] = rep.statements_checked;
  p["ok"] = rep.ok();
  p["checks"] = rows;
  r.payload = p;
  r.exit_code = rep.ok() ? kHolds : kFails;
  return r;
}

CommandResult verify_corollaries(const Globals& g) {
  const auto table = verify_bases(g.jobs);
  CommandResult r;
  std::ostringstream out;
  json rows = json::array();
  for (const auto& row : table.rows) {
    out << (row.pass() ? "pass        " : "discrepancy ") << row.entry.id << (row.entry.hand_verified ? " [hand]" : "")
        << "  ambient " << row.entry.ambient << "\n";
    out << "    base: ";
    std::vector<std::string> srcs;
    for (const auto& id : row.entry.base.identities) srcs.push_back(id.source);
    out << join(srcs, " ; ") << "\n";
    out << "    SAT = {" << join(row.sat) << "}\n    IS(generators) = {" << join(row.expected) << "}\n";
    json failing = json::array(), unexpected = json::array();
    for (const auto& f : row.failing) {
      out << "    " << f.simple << " is generated but fails " << f.label << " at " << f.witness << "\n";
      failing.push_back(json{{"simple", f.simple}, {"identity", f.label}, {"witness", f.witness}});
    }
    for (const auto& u : row.unexpected) {
      out << "    " << u.simple << " satisfies the base but embeds into none of {" << join(u.generators_checked)
          << "}\n";
      unexpected.push_back(json{{"simple", u.simple}, {"no_embedding_into", u.generators_checked}});
    }
    rows.push_back(json{{"id", row.entry.id},
                        {"about", row.entry.about},
                        {"ambient", row.entry.ambient},
                        {"base", srcs},
                        {"generators", row.entry.generators},
                        {"hand_verified", row.entry.hand_verified},
                        {"sat", row.sat},
                        {"expected", row.expected},
                        {"sat_closed", row.sat_closed},
                        {"pass", row.pass()},
                        {"generated_but_failing", failing},
                        {"satisfying_but_not_generated", unexpected}});
  }
  out << table.passes() << " of " << table.rows.size() << " bases pass\n";
  r.text = out.str();
  json p = envelope("conformance-table");
  p["rows"] = rows;
  p["passes"] = table.passes();
  p["total"] = table.rows.size();
  r.payload = p;
  r.exit_code = table.passes() == table.rows.size() ? kHolds : kFails;
  return r;
}

struct ShapeClaim {
  std::string ambient;
  std::string shape;
};

CommandResult verify_lattice(const Globals& g, const std::string& ambient, const std::string& shape) {
  std::vector<ShapeClaim> claims;
  if (!ambient.empty()) {
    if (shape.empty()) throw InputError("--ambient needs --shape");
    claims.push_back({ambient, shape});
  } else {
    claims = {{"rdqdstsh1", "(1+B9)x(1+B5)xB9"}, {"rdmsh1", "(1+B5)x(1+B3)xB5"}, {"rdpcsh1", "(1+B4)x(1+B2)xB4"}};
  }
  CommandResult r;
  std::ostringstream out;
  json rows = json::array();
  bool all = true;
  for (const auto& c : claims) {
    const auto amb = Ambient::named(c.ambient);
    const auto want = ShapeSpec::parse(c.shape);
    const auto res = verify_decomposition(*amb, want, g.jobs);
    all = all && res.ok;
    out << (res.ok ? "PASS " : "FAIL ") << c.ambient << " " << want.to_string() << " = " << want.cardinality();
    if (res.ok) out << " subvarieties (enumerated " << res.count << ")";
    else out << ": " << res.reason;
    out << "\n";
    json row{{"ambient", c.ambient},       {"shape", want.to_string()}, {"cardinality", want.cardinality()},
             {"ok", res.ok},               {"count", res.count},        {"derived_shape", res.derived.to_string()},
             {"reason", res.reason}};
    if (res.offending) row["offending"] = {res.offending->first, res.offending->second};
    rows.push_back(row);
  }
  r.text = out.str();
  json p = envelope("verify-lattice");
  p["rows"] = rows;
  r.payload = p;
  r.exit_code = all ? kHolds : kFails;
  return r;
}

CommandResult verify_primality(const Globals& g) {
  const auto cmp = primality_comparison(g.jobs);
  CommandResult r;
  std::ostringstream out;
  json rows = json::array();
  bool quasi = true, primal_core = true;
  for (const auto& row : cmp.rows) {
    const auto& a = catalog::get(row.algebra);
    out << std::left << std::setw(8) << row.algebra << primality_name(row.report.kind) << "\n";
    rows.push_back(primality_json(a, row.report));
    quasi = quasi && row.report.kind != Primality::NotQuasiprimal;
    if ((row.algebra == "2e" || row.algebra == "2bare" || row.algebra == "D3") && row.report.kind != Primality::Primal)
      primal_core = false;
  }
  json readings = json::array();
  for (const auto& rd : cmp.readings) {
    out << "reading '" << rd.name << "': primal set " << (rd.primal_set_matches ? "matches" : "differs");
    if (!rd.primal_mismatch.empty()) out << " on {" << join(rd.primal_mismatch) << "}";
    out << "; claimed semiprimal but not: {" << join(rd.not_semiprimal) << "}\n";
    readings.push_back(json{{"reading", rd.name},
                            {"claimed_primal", rd.claimed_primal},
                            {"primal_set_matches", rd.primal_set_matches},
                            {"primal_mismatch", rd.primal_mismatch},
                            {"claimed_semiprimal_but_not", rd.not_semiprimal}});
  }
  out << "all quasiprimal: " << (quasi ? "yes" : "no") << "; 2e, 2bare, D3 primal: " << (primal_core ? "yes" : "no")
      << "\n";
  r.text = out.str();
  json p = envelope("verify-primality");
  p["rows"] = rows;
  p["readings"] = readings;
  p["all_quasiprimal"] = quasi;
  r.payload = p;
  r.exit_code = quasi && primal_core ? kHolds : kFails;
  return r;
}

CommandResult verify_cep(const Globals& g) {
  const auto rows = cep_table(g.jobs);
  CommandResult r;
  std::ostringstream out;
  json jr = json::array();
  bool all = true;
  for (const auto& row : rows) {
    out << (row.cep ? "PASS " : "FAIL ") << row.algebra << "\n";
    jr.push_back(json{{"algebra", row.algebra}, {"cep", row.cep}});
    all = all && row.cep;
  }
  r.text = out.str();
  json p = envelope("verify-cep");
  p["rows"] = jr;
  r.payload = p;
  r.exit_code = all ? kHolds : kFails;
  return r;
}

CommandResult verify_simplicity(const Globals& g) {
  const auto rows = simplicity_table(g.jobs);
  CommandResult r;
  std::ostringstream out;
  json jr = json::array();
  bool all = true;
  for (const auto& row : rows) {
    const bool ok = row.congruences == 2 && row.subalgebras_simple && row.simple_iff_si;
    all = all && ok;
    out << (ok ? "PASS " : "FAIL ") << row.algebra << ": " << row.congruences << " congruences, " << row.subalgebras
        << " subalgebras, all simple " << (row.subalgebras_simple ? "yes" : "no") << "\n";
    jr.push_back(json{{"algebra", row.algebra},
                      {"congruences", row.congruences},
                      {"subalgebras", row.subalgebras},
                      {"subalgebras_simple", row.subalgebras_simple},
                      {"simple_iff_subdirectly_irreducible", row.simple_iff_si}});
  }
  r.text = out.str();
  json p = envelope("verify-simplicity");
  p["rows"] = jr;
  r.payload = p;
  r.exit_code = all ? kHolds : kFails;
  return r;
}

CommandResult verify_stone(const Globals& g, int max_size) {
  const auto rep = exhaustive_stone_check(max_size, g.jobs, resolve_timeout(g));
  CommandResult r;
  std::ostringstream out;
  json sizes = json::object();
  for (std::size_t s = 2; s < rep.lattices_per_size.size(); ++s) {
    out << "size " << s << ": " << rep.lattices_per_size[s] << " distributive lattices\n";
    sizes[std::to_string(s)] = rep.lattices_per_size[s];
  }
  json violators = json::array();
  for (const auto& v : rep.violators) {
    out << "VIOLATOR " << v.failure.witness_text(v.algebra) << "\n" << tables_text(v.algebra);
    violators.push_back(json{{"algebra", algebra_to_json(v.algebra)}, {"witness", v.failure.witness_text(v.algebra)}});
  }
  out << rep.algebras_checked << " algebras satisfy SH+DQD+DM+L1+R; " << rep.violators.size()
      << " violate the Stone identity" << (rep.inconclusive ? " (inconclusive: timeout)" : "") << "\n";
  r.text = out.str();
  json p = envelope("verify-stone");
  p["max_size"] = max_size;
  p["lattices_per_size"] = sizes;
  p["algebras_checked"] = rep.algebras_checked;
  p["violators"] = violators;
  p["inconclusive"] = rep.inconclusive;
  r.payload = p;
  r.exit_code = !rep.violators.empty() ? kFails : rep.inconclusive ? kInconclusive : kHolds;
  return r;
}

CommandResult verify_level2(const Globals& g, const std::string& lattice_ref, const std::string& out_path) {
  const FiniteAlgebra lattice = lattice_ref.empty() ? catalog::fig2_lattice() : load_algebra(lattice_ref);
  const auto res = find_stone_counterexample_level2(lattice, resolve_timeout(g), g.jobs);
  CommandResult r;
  std::ostringstream out;
  json p = envelope("verify-level2");
  p["lattice"] = lattice.name();
  p["inconclusive"] = res.inconclusive;
  if (res.algebra) {
    const auto& a = *res.algebra;
    const auto st = satisfies(a, SuiteLibrary::builtin().get("St").identities.front());
    out << "counterexample on " << lattice.name() << ": satisfies SH+DQD+DM+L2+R, fails St at "
        << st.witness_text(a) << "\n"
        << tables_text(a);
    p["algebra"] = algebra_to_json(a);
    p["stone_witness"] = st.witness_text(a);
    if (!out_path.empty()) {
      save_algebra_file(a, out_path);
      out << "wrote " << out_path << "\n";
    }
    r.exit_code = kHolds;
  } else if (res.inconclusive) {
    out << "inconclusive: timeout after " << res.nodes << " nodes\n";
    r.exit_code = kInconclusive;
  } else {
    out << "none: search completed without a counterexample on " << lattice.name() << "\n";
    r.exit_code = kFails;
  }
  r.text = out.str();
  r.payload = p;
  return r;
}

// ---------------------------------------------------------------- variety

std::vector<FiniteAlgebra> load_all(const std::vector<std::string>& refs) {
  std::vector<FiniteAlgebra> out;
  for (const auto& ref : refs) out.push_back(load_algebra(ref));
  return out;
}

CommandResult variety_member(const std::string& ref, const std::string& gens) {
  const FiniteAlgebra s = load_algebra(ref);
  const auto list = split(gens);
  if (list.empty()) throw InputError("--gens is empty");
  const auto gen_algebras = load_all(list);
  const bool member = in_variety(s, gen_algebras);
  CommandResult r;
  r.text = s.name() + (member ? " is" : " is not") + " in V(" + join(list) + ")\n";
  json p = envelope("variety-member");
  p["algebra"] = s.name();
  p["generators"] = list;
  p["member"] = member;
  r.payload = p;
  r.exit_code = member ? kHolds : kFails;
  return r;
}

CommandResult variety_count(const Globals& g, const std::string& ambient) {
  const auto amb = Ambient::named(ambient);
  const auto count = subvariety_count(*amb, g.jobs);
  const auto dec = verify_decomposition(*amb, ShapeSpec{}, g.jobs);
  CommandResult r;
  std::ostringstream out;
  out << ambient << ": " << amb->size() << " simples, " << count << " subvarieties";
  const bool shaped = !dec.offending && !dec.derived.factors.empty();
  if (shaped) out << " = " << dec.derived.to_string();
  out << "\n";
  r.text = out.str();
  json p = envelope("variety-count");
  p["ambient"] = ambient;
  p["simples"] = amb->keys();
  p["count"] = count;
  if (shaped) {
    json factors = json::array();
    for (const auto& f : dec.derived.factors)
      factors.push_back(json{{"lifted", f.lifted}, {"atoms", f.atoms}, {"cardinality", (std::uint64_t{1} << f.atoms) + (f.lifted ? 1 : 0)}});
    p["shape"] = dec.derived.to_string();
    p["factors"] = factors;
  }
  r.payload = p;
  return r;
}

CommandResult variety_closure(const std::string& ambient, const std::string& gens) {
  const auto amb = Ambient::named(ambient);
  const auto v = is_closure(amb, split(gens));
  CommandResult r;
  r.text = "{" + join(v.keys()) + "}\n";
  json p = envelope("variety-closure");
  p["ambient"] = ambient;
  p["generators"] = split(gens);
  p["closure"] = v.keys();
  r.payload = p;
  return r;
}

// ---------------------------------------------------------------- amalgam

json verdict_json(const AmalgamVerdict& v, const Ambient& amb) {
  const auto& am = v.amalgam;
  const auto& a = amb.algebra(amb.index_of(am.a));
  const auto& b = amb.algebra(amb.index_of(am.b));
  const auto& c = amb.algebra(amb.index_of(am.c));
  json j{{"A", am.a}, {"B", am.b}, {"C", am.c}, {"i", labelled_map(a, b, am.i)}, {"j", labelled_map(a, c, am.j)},
         {"verdict", std::string(status_name(v.status))}};
  if (v.witness) {
    j["D"] = v.witness->description;
    j["f"] = labelled_map(b, v.witness->target, v.witness->f);
    j["g"] = labelled_map(c, v.witness->target, v.witness->g);
  }
  if (!v.obstructions.empty()) {
    json obs = json::array();
    for (const auto& o : v.obstructions) {
      std::string why = o.no_b_embedding && o.no_c_embedding ? "no embedding of B or C"
                        : o.no_b_embedding                   ? "no embedding of B"
                        : o.no_c_embedding                   ? "no embedding of C"
                                                             : "embeddings never agree on A";
      obs.push_back(json{{"simple", o.simple}, {"reason", why}});
    }
    j["obstructions"] = obs;
  }
  return j;
}

std::string verdict_text(const AmalgamVerdict& v, const Ambient& amb) {
  const auto& am = v.amalgam;
  const auto& a = amb.algebra(amb.index_of(am.a));
  const auto& b = amb.algebra(amb.index_of(am.b));
  const auto& c = amb.algebra(amb.index_of(am.c));
  std::ostringstream out;
  out << "(" << am.a << "; " << am.b << ", " << am.c << ") i=" << map_text(a, b, am.i) << " j=" << map_text(a, c, am.j)
      << "\n";
  if (v.witness) {
    out << "    witness " << v.witness->description << " f=" << map_text(b, v.witness->target, v.witness->f)
        << " g=" << map_text(c, v.witness->target, v.witness->g) << "\n";
  } else {
    out << "    " << status_name(v.status) << ":";
    for (const auto& o : v.obstructions) {
      out << " " << o.simple << "("
          << (o.no_b_embedding ? "B" : "") << (o.no_c_embedding ? "C" : "") << (o.no_agreement ? "agree" : "") << ")";
    }
    out << "\n";
  }
  return out.str();
}

CommandResult amalgam_check(const Globals& g, const std::string& variety, const std::string& ambient_name,
                            const std::string& all_of, int brute) {
  CommandResult r;
  std::ostringstream out;
  json p = envelope("amalgam-table");
  bool cross_ok = true;
  auto table_for = [&](const ClosedSimpleSet& v) {
    const auto verdicts = amalgam_table(v, g.jobs);
    json rows = json::array();
    std::size_t obstructed = 0;
    for (const auto& verdict : verdicts) {
      out << verdict_text(verdict, v.ambient());
      json row = verdict_json(verdict, v.ambient());
      if (verdict.status != AmalgamStatus::Witness) ++obstructed;
      if (verdict.witness) row["revalidated"] = revalidate(verdict, v.ambient());
      if (brute > 0) {
        const auto bf = brute_force_amalgamation(verdict.amalgam, v, brute);
        const bool agree = (bf.status == AmalgamStatus::Witness) == (verdict.status == AmalgamStatus::Witness);
        cross_ok = cross_ok && agree;
        row["brute_force"] = std::string(status_name(bf.status));
        row["brute_force_agrees"] = agree;
        if (!agree) out << "    brute force disagrees: " << status_name(bf.status) << "\n";
      }
      rows.push_back(row);
    }
    out << verdicts.size() << " amalgams, " << obstructed << " obstructed\n";
    return std::make_pair(rows, obstructed);
  };

  std::size_t failures = 0;
  if (!all_of.empty()) {
    const auto amb = Ambient::named(all_of);
    const ClosedSimpleSet full(amb, amb->full_mask());
    auto [rows, obstructed] = table_for(full);
    const auto census = ap_census(amb, g.jobs);
    out << "subvarieties: " << census.subvarieties << ", without the amalgamation property: " << census.without_ap
        << "\n";
    json minimal = json::array();
    for (const auto& m : census.minimal_failures) minimal.push_back(verdict_json(m, *amb));
    p["ambient"] = all_of;
    p["amalgams"] = rows;
    p["subvarieties"] = census.subvarieties;
    p["subvarieties_without_ap"] = census.without_ap;
    p["failing_in_generated_subvariety"] = minimal;
    failures = census.without_ap;
  } else {
    if (variety.empty()) throw InputError("amalgam check needs --variety or --all-subvarieties-of");
    const auto amb = Ambient::named(ambient_name);
    const auto v = is_closure(amb, split(variety));
    out << "V(" << variety << ") in " << ambient_name << " = {" << join(v.keys()) << "}\n";
    auto [rows, obstructed] = table_for(v);
    p["ambient"] = ambient_name;
    p["variety"] = v.keys();
    p["amalgams"] = rows;
    failures = obstructed;
  }
  const std::string verdict = failures == 0 ? "agrees" : "disagrees";
  out << "expected: every amalgam completes in every subvariety; computed verdict " << verdict << "\n";
  p["claim_every_subvariety_has_ap"] = verdict;
  if (brute > 0) {
    out << "brute force (" << brute << " factors) " << (cross_ok ? "agrees on every amalgam" : "DISAGREES") << "\n";
    p["brute_force_agrees"] = cross_ok;
  }
  r.text = out.str();
  r.payload = p;
  r.exit_code = failures == 0 && cross_ok ? kHolds : kFails;
  return r;
}

// ---------------------------------------------------------------- search

CommandResult search_cmd(const Globals& g, const std::string& lattice_ref, const std::vector<std::string>& require,
                         const std::vector<std::string>& forbid, std::optional<std::size_t> limit,
                         const std::string& order, const std::string& out_dir) {
  const FiniteAlgebra lattice = load_algebra(lattice_ref).lattice_reduct();
  std::vector<std::string> req_items, forbid_items;
  for (const auto& item : require)
    for (const auto& s : split(item)) req_items.push_back(s);
  for (const auto& item : forbid) forbid_items.push_back(item);
  const Suite required = resolve_suite_spec(req_items, "required");
  const Suite forbidden = resolve_suite_spec(forbid_items, "forbidden");
  if (!forbidden.quasi.empty()) throw InputError("--forbid accepts identities only");
  SearchSpec spec{lattice,   required, forbidden.identities, limit, resolve_timeout(g),
                  order == "column" ? CellOrder::ColumnMajor : CellOrder::RowMajor, g.jobs, lattice.name() + "_"};
  const auto res = enumerate_algebras(spec);
  CommandResult r;
  std::ostringstream out;
  json sols = json::array();
  std::size_t k = 0;
  for (const auto& s : res.solutions) {
    out << tables_text(s.algebra);
    if (s.duplicate_of) out << "  (isomorphic to solution " << *s.duplicate_of + 1 << " via a lattice automorphism)\n";
    json j = algebra_to_json(s.algebra);
    if (s.duplicate_of) j["duplicate_of"] = s.algebra.name().substr(0, s.algebra.name().rfind('_') + 1) + std::to_string(*s.duplicate_of + 1);
    sols.push_back(j);
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      save_algebra_file(s.algebra, std::filesystem::path(out_dir) / (s.algebra.name() + ".json"));
    }
    ++k;
  }
  out << res.solutions.size() << " solutions" << (res.truncated ? " (limit reached)" : "")
      << (res.inconclusive ? " (inconclusive: timeout)" : "") << ", " << res.nodes << " nodes\n";
  r.text = out.str();
  json p = envelope("search");
  p["lattice"] = lattice.name();
  std::vector<std::string> req_src, forbid_src;
  for (const auto& id : required.identities) req_src.push_back(id.source);
  for (const auto& q : required.quasi) req_src.push_back(q.source);
  for (const auto& id : forbidden.identities) forbid_src.push_back(id.source);
  p["require"] = req_src;
  p["forbid"] = forbid_src;
  p["complete"] = !res.inconclusive && !res.truncated;
  p["truncated"] = res.truncated;
  p["inconclusive"] = res.inconclusive;
  p["nodes"] = res.nodes;
  p["solutions"] = sols;
  r.payload = p;
  r.exit_code = res.inconclusive ? kInconclusive : kHolds;
  return r;
}

}  // namespace

std::string CommandResult::output() const {
  if (json_mode && payload) return payload->dump(2) + "\n";
  return text;
}

CommandResult run(const std::vector<std::string>& args) {
  CLI::App app{"Verification workbench for regular dually quasi-De Morgan semi-Heyting algebras", "shw"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Emit the JSON payload instead of text");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for randomized checks");
  app.add_option("--timeout", g.timeout, "Search timeout in seconds (overrides SHW_TIMEOUT)");

  std::function<CommandResult()> action;
  std::string key, text, assign, out_path, suite_file, ambient, shape, gens, lattice, order = "row", all_of;
  std::string closure_ambient, amalgam_ambient;
  std::vector<std::string> suites, identities, require, forbid;
  int max_size = 4, brute = 0;
  std::optional<std::size_t> limit;

  auto* cat = app.add_subcommand("catalog", "List or export catalog algebras");
  cat->require_subcommand(1);
  cat->add_subcommand("list", "List every catalog key")->callback([&] { action = [&] { return catalog_list(g); }; });
  auto* exp = cat->add_subcommand("export", "Print or write an algebra as JSON");
  exp->add_option("key", key, "Catalog key")->required();
  exp->add_option("--out", out_path, "Write to this file");
  exp->callback([&] { action = [&] { return catalog_export(key, out_path); }; });

  auto* ev = app.add_subcommand("eval", "Evaluate a term");
  ev->add_option("algebra", key, "Catalog key or JSON file")->required();
  ev->add_option("term", text, "Term")->required();
  ev->add_option("--assign", assign, "x=a,y=b using element labels");
  ev->callback([&] { action = [&] { return eval_cmd(key, text, assign); }; });

  auto* chk = app.add_subcommand("check", "Check suites or identities exhaustively");
  chk->add_option("algebra", key, "Catalog key or JSON file")->required();
  chk->add_option("--suite", suites, "Suite names (comma-separated, repeatable)");
  chk->add_option("--identity", identities, "Identity or quasi-identity (repeatable)");
  chk->add_option("--suite-file", suite_file, "Extra .ids file");
  chk->callback([&] { action = [&] { return check_cmd(key, suites, identities, suite_file); }; });

  auto* st = app.add_subcommand("structure", "Subalgebras, congruences, automorphisms, CEP");
  st->add_option("what", text, "subs|cons|autos|cep")->required()->check(CLI::IsMember({"subs", "cons", "autos", "cep"}));
  st->add_option("algebra", key, "Catalog key or JSON file")->required();
  st->callback([&] { action = [&] { return structure_cmd(text, key); }; });

  auto* sm = app.add_subcommand("simple", "Simplicity, subdirect irreducibility, direct indecomposability");
  sm->add_option("algebra", key, "Catalog key or JSON file")->required();
  sm->callback([&] { action = [&] { return simple_cmd(key); }; });

  auto* pr = app.add_subcommand("primality", "Primal / semiprimal / quasiprimal classification");
  pr->add_option("algebra", key, "Catalog key or JSON file")->required();
  pr->callback([&] { action = [&] { return primality_cmd(key); }; });

  auto* vf = app.add_subcommand("verify", "Catalog-wide verification reports");
  vf->add_option("what", text, "catalog|lemmas|corollaries|lattice|primality|cep|simplicity|stone|level2")
      ->required()
      ->check(CLI::IsMember(
          {"catalog", "lemmas", "corollaries", "lattice", "primality", "cep", "simplicity", "stone", "level2"}));
  vf->add_option("--max-size", max_size, "Largest lattice for stone")->check(CLI::Range(2, 7));
  vf->add_option("--ambient", ambient, "Ambient for lattice");
  vf->add_option("--shape", shape, "Expected shape for lattice, e.g. (1+B5)x(1+B3)xB5");
  vf->add_option("--lattice", lattice, "Lattice for level2 (default: the seven-element lattice)");
  vf->add_option("--out", out_path, "Write the level2 counterexample to this file");
  vf->callback([&] {
    action = [&]() -> CommandResult {
      if (text == "catalog") return verify_catalog();
      if (text == "lemmas") return verify_lemmas(g);
      if (text == "corollaries") return verify_corollaries(g);
      if (text == "lattice") return verify_lattice(g, ambient, shape);
      if (text == "primality") return verify_primality(g);
      if (text == "cep") return verify_cep(g);
      if (text == "simplicity") return verify_simplicity(g);
      if (text == "stone") return verify_stone(g, max_size);
      return verify_level2(g, lattice, out_path);
    };
  });

  auto* va = app.add_subcommand("variety", "Subvariety membership, closure and counting");
  va->require_subcommand(1);
  auto* mem = va->add_subcommand("member", "Is a simple algebra in V(generators)?");
  mem->add_option("algebra", key, "Catalog key or JSON file")->required();
  mem->add_option("--gens", gens, "Generators, comma-separated")->required();
  mem->callback([&] { action = [&] { return variety_member(key, gens); }; });
  auto* cnt = va->add_subcommand("count", "Count the subvarieties of an ambient");
  cnt->add_option("--ambient", ambient, "rdqdstsh1|rdmsh1|rdpcsh1|dqdbsh|rdmh1|rdmcmsh1")->required();
  cnt->callback([&] { action = [&] { return variety_count(g, ambient); }; });
  auto* clo = va->add_subcommand("closure", "IS-closure of generators inside an ambient");
  clo->add_option("--ambient", closure_ambient, "Ambient name")->default_val("rdqdstsh1");
  clo->add_option("--gens", gens, "Generators, comma-separated")->required();
  clo->callback([&] { action = [&] { return variety_closure(closure_ambient, gens); }; });

  auto* am = app.add_subcommand("amalgam", "Amalgamation verdicts");
  am->require_subcommand(1);
  auto* amc = am->add_subcommand("check", "Decide every amalgam of a subvariety");
  amc->add_option("--variety", gens, "Generators of the subvariety, comma-separated");
  amc->add_option("--ambient", amalgam_ambient, "Ambient for --variety")->default_val("rdqdstsh1");
  amc->add_option("--all-subvarieties-of", all_of, "Census over every subvariety of an ambient");
  amc->add_option("--brute-force", brute, "Cross-check with products of up to N simples")->check(CLI::Range(0, 3));
  amc->callback([&] { action = [&] { return amalgam_check(g, gens, amalgam_ambient, all_of, brute); }; });

  auto* se = app.add_subcommand("search", "Enumerate algebras on a lattice");
  se->add_option("--lattice", lattice, "Catalog key or JSON file (lattice reduct is used)")->required();
  se->add_option("--require", require, "Suite names or identities (repeatable)")->required();
  se->add_option("--forbid", forbid, "Suite names or identities that must fail (repeatable)");
  se->add_option("--limit", limit, "Stop after N solutions");
  se->add_option("--order", order, "row|column")->check(CLI::IsMember({"row", "column"}));
  se->add_option("--out-dir", out_path, "Write each solution as JSON into this directory");
  se->callback([&] { action = [&] { return search_cmd(g, lattice, require, forbid, limit, order, out_path); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  CommandResult result;
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.text = app.help();
    return result;
  } catch (const CLI::CallForAllHelp&) {
    result.text = app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = kUsage;
    result.text = std::string("error: ") + e.what() + "\n\n" + app.help();
    return result;
  }
  try {
    result = action ? action() : CommandResult{kUsage, app.help(), std::nullopt, false};
  } catch (const Error& e) {
    result = CommandResult{kUsage, std::string("error: ") + e.what() + "\n", std::nullopt, false};
  } catch (const std::exception& e) {
    result = CommandResult{kUsage, std::string("internal error: ") + e.what() + "\n", std::nullopt, false};
  }
  result.json_mode = g.json;
  if (g.json && !result.payload) result.payload = json{{"schema", "shw.error/1"}, {"exit_code", result.exit_code}, {"message", result.text}};
  return result;
}

}  // namespace shw::cli
