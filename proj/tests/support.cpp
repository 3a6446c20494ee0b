#include "support.hpp"

#include "shw/equational.hpp"

namespace shw::test {

namespace {
std::uint64_t g_seed = 20240601;
}

std::uint64_t seed() { return g_seed; }
void set_seed(std::uint64_t s) { g_seed = s; }

Term random_term(std::mt19937_64& rng, int depth, bool with_neg) {
  static const char* vars[] = {"x", "y", "z"};
  std::uniform_int_distribution<int> leaf(0, 4);
  if (depth <= 1 || std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
    const int k = leaf(rng);
    if (k == 3) return Term::zero();
    if (k == 4) return Term::one();
    return Term::var(vars[k]);
  }
  const int kinds = !with_neg ? 4 : depth >= 3 ? 8 : 7;
  switch (std::uniform_int_distribution<int>(0, kinds - 1)(rng)) {
    case 0: return Term::join(random_term(rng, depth - 1, with_neg), random_term(rng, depth - 1, with_neg));
    case 1: return Term::meet(random_term(rng, depth - 1, with_neg), random_term(rng, depth - 1, with_neg));
    case 2: return Term::arrow(random_term(rng, depth - 1, with_neg), random_term(rng, depth - 1, with_neg));
    case 3: return Term::star(random_term(rng, depth - 1, with_neg));
    case 4: return Term::neg(random_term(rng, depth - 1, with_neg));
    case 5: return Term::plus(random_term(rng, depth - 1, with_neg));
    case 6: return Term::iter_prime_star(random_term(rng, depth - 1, with_neg), 1 + static_cast<int>(rng() % 3));
    default: return Term::neg(Term::star(random_term(rng, depth - 2, with_neg)));
  }
}

Elem naive_eval(const FiniteAlgebra& a, const Term& t, const Assignment& env) {
  const auto& arrow = *a.arrow_table();
  auto neg = [&](Elem x) { return (*a.neg_table())[static_cast<std::size_t>(x)]; };
  auto star = [&](Elem x) { return arrow(x, a.bot()); };
  switch (t.kind()) {
    case TermKind::Var: return env.at(t.name());
    case TermKind::Zero: return a.bot();
    case TermKind::One: return a.top();
    case TermKind::Join: return a.join_table()(naive_eval(a, t.lhs(), env), naive_eval(a, t.rhs(), env));
    case TermKind::Meet: return a.meet_table()(naive_eval(a, t.lhs(), env), naive_eval(a, t.rhs(), env));
    case TermKind::Arrow: return arrow(naive_eval(a, t.lhs(), env), naive_eval(a, t.rhs(), env));
    case TermKind::Neg: return neg(naive_eval(a, t.lhs(), env));
    case TermKind::Star: return star(naive_eval(a, t.lhs(), env));
    case TermKind::Plus: return neg(star(neg(naive_eval(a, t.lhs(), env))));
    case TermKind::IterPrimeStar: {
      Elem v = naive_eval(a, t.lhs(), env);
      for (int i = 0; i < t.count(); ++i) v = star(neg(v));
      return v;
    }
  }
  return a.bot();
}

std::vector<Assignment> all_assignments(const FiniteAlgebra& a, const std::vector<std::string>& vars) {
  std::vector<Assignment> out;
  std::vector<Elem> cur(vars.size(), 0);
  const Elem n = static_cast<Elem>(a.size());
  while (true) {
    Assignment env;
    for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = cur[i];
    out.push_back(env);
    std::size_t i = vars.size();
    while (i > 0 && ++cur[i - 1] == n) cur[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

std::vector<std::vector<Elem>> brute_force_subuniverses(const FiniteAlgebra& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Elem>> out;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    auto in = [&](Elem x) { return (m >> x) & 1u; };
    if (!in(a.bot()) || !in(a.top())) continue;
    bool closed = true;
    for (Elem x = 0; x < static_cast<Elem>(n) && closed; ++x) {
      if (!in(x)) continue;
      if (a.has_neg() && !in(a.neg(x))) closed = false;
      for (Elem y = 0; y < static_cast<Elem>(n) && closed; ++y) {
        if (!in(y)) continue;
        if (!in(a.join(x, y)) || !in(a.meet(x, y))) closed = false;
        if (a.has_arrow() && !in(a.arrow(x, y))) closed = false;
      }
    }
    if (!closed) continue;
    std::vector<Elem> s;
    for (Elem x = 0; x < static_cast<Elem>(n); ++x)
      if (in(x)) s.push_back(x);
    out.push_back(s);
  }
  return out;
}

std::string source_path(const std::string& relative) { return std::string(SHW_SOURCE_DIR) + "/" + relative; }

}  // namespace shw::test

