#include "shw/equational.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "shw/error.hpp"

namespace shw {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_suite_files();
}

Assignment CheckResult::witness_assignment() const {
  Assignment env;
  for (std::size_t i = 0; i < witness.size(); ++i) env[variables[i]] = witness[i];
  return env;
}

std::string CheckResult::witness_text(const FiniteAlgebra& a) const {
  std::string out;
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (i) out += ", ";
    out += variables[i] + "=" + a.label(witness[i]);
  }
  return out;
}

namespace {

/// Visits all |A|^k assignments in lexicographic order until `visit` returns
/// false. Returns the assignment it stopped at, or empty if it ran to the end.
template <class Visit>
std::vector<Elem> first_failure(std::size_t n, std::size_t k, Visit&& visit) {
  std::vector<Elem> vals(k, 0);
  for (;;) {
    if (!visit(std::span<const Elem>(vals))) return vals;
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (static_cast<std::size_t>(++vals[i]) < n) break;
      vals[i] = 0;
      if (i == 0) return {};
    }
    if (k == 0) return {};
  }
}

}  // namespace

CheckResult satisfies(const FiniteAlgebra& a, const Identity& id) {
  require_signature(a, id.uses_arrow(), id.uses_neg(), "identity " + pretty(id));
  CheckResult r;
  r.variables = id.variables();
  CompiledTerm lhs(id.equation_lhs(), r.variables);
  CompiledTerm rhs(id.equation_rhs(), r.variables);
  bool failed = false;
  auto w = first_failure(a.size(), r.variables.size(), [&](std::span<const Elem> v) {
    failed = lhs.eval(a, v) != rhs.eval(a, v);
    return !failed;
  });
  if (failed) {
    r.holds = false;
    r.witness = std::move(w);
  }
  return r;
}

CheckResult satisfies(const FiniteAlgebra& a, std::string_view identity_src) {
  return satisfies(a, parse_identity(identity_src));
}

CheckResult satisfies_quasi(const FiniteAlgebra& a, const QuasiIdentity& q) {
  require_signature(a, q.uses_arrow(), q.uses_neg(), "quasi-identity " + pretty(q));
  CheckResult r;
  r.variables = q.variables();
  struct Compiled {
    CompiledTerm lhs, rhs;
    PremiseRelation rel;
  };
  std::vector<Compiled> premises;
  for (const auto& p : q.premises) {
    premises.push_back({CompiledTerm(p.lhs, r.variables), CompiledTerm(p.rhs, r.variables), p.relation});
  }
  CompiledTerm lhs(q.conclusion.equation_lhs(), r.variables);
  CompiledTerm rhs(q.conclusion.equation_rhs(), r.variables);
  bool failed = false;
  auto w = first_failure(a.size(), r.variables.size(), [&](std::span<const Elem> v) {
    for (const auto& p : premises) {
      Elem s = p.lhs.eval(a, v);
      Elem t = p.rhs.eval(a, v);
      bool ok = p.rel == PremiseRelation::Eq ? s == t : p.rel == PremiseRelation::Neq ? s != t : a.leq(s, t);
      if (!ok) return true;
    }
    failed = lhs.eval(a, v) != rhs.eval(a, v);
    return !failed;
  });
  if (failed) {
    r.holds = false;
    r.witness = std::move(w);
  }
  return r;
}

const std::string* Suite::meta_value(std::string_view key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return &v;
  return nullptr;
}

bool Suite::needs_arrow() const {
  return std::any_of(identities.begin(), identities.end(), [](const Identity& i) { return i.uses_arrow(); }) ||
         std::any_of(quasi.begin(), quasi.end(), [](const QuasiIdentity& q) { return q.uses_arrow(); });
}

bool Suite::needs_neg() const {
  return std::any_of(identities.begin(), identities.end(), [](const Identity& i) { return i.uses_neg(); }) ||
         std::any_of(quasi.begin(), quasi.end(), [](const QuasiIdentity& q) { return q.uses_neg(); });
}

bool SuiteReport::holds() const {
  return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.result.holds; });
}

std::vector<const SuiteReport::Entry*> SuiteReport::failures() const {
  std::vector<const Entry*> out;
  for (const auto& e : entries)
    if (!e.result.holds) out.push_back(&e);
  return out;
}

SuiteReport satisfies_suite(const FiniteAlgebra& a, const Suite& s) {
  require_signature(a, s.needs_arrow(), s.needs_neg(), "suite " + s.name);
  SuiteReport report{s.name, a.name(), {}};
  for (const auto& id : s.identities) report.entries.push_back({id.label, id.source, satisfies(a, id)});
  for (const auto& q : s.quasi) report.entries.push_back({q.label, q.source, satisfies_quasi(a, q)});
  return report;
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

SuiteLibrary SuiteLibrary::parse(std::string_view text, std::string_view origin, const SuiteLibrary* prior) {
  SuiteLibrary lib;
  Suite* current = nullptr;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  auto where = [&] { return std::string(origin) + ":" + std::to_string(line_no) + ": "; };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InputError(where() + "unterminated section header");
      std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (lib.contains(name)) throw InputError(where() + "duplicate suite " + name);
      lib.suites_.push_back(Suite{name, {}, {}, {}, {}});
      current = &lib.suites_.back();
      continue;
    }
    if (!current) throw InputError(where() + "statement outside of a [section]");
    if (line.rfind("%about", 0) == 0) {
      current->about = trim(std::string_view(line).substr(6));
      continue;
    }
    if (line.rfind("%include", 0) == 0) {
      std::string other = trim(std::string_view(line).substr(8));
      const bool local = lib.contains(other) && other != current->name;
      if (!local && !(prior && prior->contains(other))) {
        throw InputError(where() + "cannot include unknown suite " + other);
      }
      const Suite copy = local ? lib.get(other) : prior->get(other);
      current->identities.insert(current->identities.end(), copy.identities.begin(), copy.identities.end());
      current->quasi.insert(current->quasi.end(), copy.quasi.begin(), copy.quasi.end());
      continue;
    }
    if (line.front() == '%') {
      const auto space = line.find_first_of(" \t");
      std::string key = line.substr(1, space == std::string::npos ? std::string::npos : space - 1);
      if (key.empty()) throw InputError(where() + "empty directive");
      current->meta.emplace_back(key, space == std::string::npos ? "" : trim(std::string_view(line).substr(space)));
      continue;
    }
    std::string label;
    std::string body = line;
    if (auto colon = line.find(':'); colon != std::string::npos) {
      label = trim(std::string_view(line).substr(0, colon));
      body = trim(std::string_view(line).substr(colon + 1));
    }
    if (label.empty()) label = current->name + "#" + std::to_string(current->size() + 1);
    try {
      Statement st = parse_statement(body);
      if (auto* id = std::get_if<Identity>(&st)) {
        id->label = label;
        current->identities.push_back(std::move(*id));
      } else {
        auto& q = std::get<QuasiIdentity>(st);
        q.label = label;
        current->quasi.push_back(std::move(q));
      }
    } catch (const ParseError& e) {
      throw InputError(where() + e.what());
    }
  }
  return lib;
}

const SuiteLibrary& SuiteLibrary::builtin() {
  static const SuiteLibrary lib = [] {
    SuiteLibrary all;
    // core defines the named axiom suites the other files include.
    auto files = detail::embedded_suite_files();
    std::stable_partition(files.begin(), files.end(), [](const auto& f) { return f.first == "core"; });
    for (const auto& [origin, text] : files) {
      SuiteLibrary part = parse(text, origin, &all);
      for (auto& s : part.suites_) {
        if (all.contains(s.name)) throw InputError("duplicate suite " + s.name);
        all.suites_.push_back(std::move(s));
      }
    }
    return all;
  }();
  return lib;
}

SuiteLibrary SuiteLibrary::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path, &builtin());
}

bool SuiteLibrary::contains(std::string_view name) const {
  return std::any_of(suites_.begin(), suites_.end(), [&](const Suite& s) { return s.name == name; });
}

const Suite& SuiteLibrary::get(std::string_view name) const {
  for (const auto& s : suites_)
    if (s.name == name) return s;
  throw InputError("unknown suite '" + std::string(name) + "'");
}

std::vector<std::string> SuiteLibrary::names() const {
  std::vector<std::string> out;
  for (const auto& s : suites_) out.push_back(s.name);
  return out;
}

Suite SuiteLibrary::combine(const std::vector<std::string>& names, std::string name) const {
  Suite out;
  for (const auto& n : names) {
    const Suite& s = get(n);
    out.identities.insert(out.identities.end(), s.identities.begin(), s.identities.end());
    out.quasi.insert(out.quasi.end(), s.quasi.begin(), s.quasi.end());
    if (name.empty()) out.name += (out.name.empty() ? "" : "+") + n;
  }
  if (!name.empty()) out.name = std::move(name);
  return out;
}

Suite resolve_suite_spec(const std::vector<std::string>& items, std::string name) {
  const auto& lib = SuiteLibrary::builtin();
  Suite out{std::move(name), {}, {}, {}, {}};
  for (const auto& raw : items) {
    std::string item = trim(raw);
    if (item.empty()) continue;
    if (lib.contains(item)) {
      const Suite& s = lib.get(item);
      out.identities.insert(out.identities.end(), s.identities.begin(), s.identities.end());
      out.quasi.insert(out.quasi.end(), s.quasi.begin(), s.quasi.end());
      continue;
    }
    Statement st = parse_statement(item);
    if (auto* id = std::get_if<Identity>(&st)) {
      id->label = item;
      out.identities.push_back(std::move(*id));
    } else {
      auto& q = std::get<QuasiIdentity>(st);
      q.label = item;
      out.quasi.push_back(std::move(q));
    }
  }
  return out;
}

}  // namespace shw
