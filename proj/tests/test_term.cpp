#include <doctest.h>

#include "shw/catalog.hpp"
#include "shw/error.hpp"
#include "shw/structure.hpp"
#include "shw/term.hpp"
#include "support.hpp"

using namespace shw;

TEST_CASE("parse_term builds the expected trees") {
  CHECK(parse_term("x ^ (x -> y)") == Term::meet(Term::var("x"), Term::arrow(Term::var("x"), Term::var("y"))));
  CHECK(parse_term("x*'") == Term::neg(Term::star(Term::var("x"))));
  CHECK(parse_term("x+") == Term::plus(Term::var("x")));
  CHECK(parse_term("x{2}") == Term::iter_prime_star(Term::var("x"), 2));
  // -> is weakest and right associative; ^ binds tighter than v.
  CHECK(parse_term("x -> y -> z") ==
        Term::arrow(Term::var("x"), Term::arrow(Term::var("y"), Term::var("z"))));
  CHECK(parse_term("x v y ^ z") == Term::join(Term::var("x"), Term::meet(Term::var("y"), Term::var("z"))));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_term(""), ParseError);
  CHECK_THROWS_AS(parse_term("x ^"), ParseError);
  try {
    parse_term("x ^ # y");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(parse_term("(x v y"), ParseError);
  CHECK_THROWS_AS(parse_term("2"), ParseError);
}

TEST_CASE("parse_identity") {
  const auto r = parse_identity("x ^ x+ <= y v y*");
  CHECK(r.relation == Relation::Leq);
  CHECK(r.lhs == Term::meet(Term::var("x"), Term::plus(Term::var("x"))));
  CHECK(r.rhs == Term::join(Term::var("y"), Term::star(Term::var("y"))));
  const auto triv = parse_identity("x = x");
  CHECK(triv.relation == Relation::Eq);
  CHECK(triv.lhs == Term::var("x"));
  CHECK(triv.rhs == Term::var("x"));
  const auto st = parse_identity("x* v x** = 1");
  CHECK(st.lhs == Term::join(Term::star(Term::var("x")), Term::star(Term::star(Term::var("x")))));
  CHECK(st.rhs == Term::one());
}

TEST_CASE("eval reads the tables") {
  const auto& l2 = catalog::get("L2");
  CHECK(l2.label(eval(l2, parse_term("0 -> a"), {{"a", l2.index_of("a")}})) == "a");
  const auto& e = catalog::get("2e");
  CHECK(eval(e, parse_term("x'"), {{"x", 0}}) == 1);
  const auto& l9 = catalog::get("L9dm");
  const Assignment env{{"x", l9.index_of("a")}};
  CHECK(l9.label(eval(l9, parse_term("(x ^ x'*)'*"), env)) == "0");
  CHECK(l9.label(eval(l9, parse_term("x ^ x'*"), env)) == "0");
}

TEST_CASE("eval errors") {
  const auto& l2 = catalog::get("L2");
  CHECK_THROWS_AS(eval(l2, parse_term("x v y"), {{"x", 0}}), InputError);
  CHECK_THROWS_AS(eval(l2, parse_term("x'"), {{"x", 0}}), SignatureError);
}

TEST_CASE("pretty prints minimal parentheses") {
  CHECK(pretty(Term::meet(Term::var("x"), Term::var("y"))) == "x ^ y");
  CHECK(pretty(Term::arrow(Term::zero(), Term::one())) == "0 -> 1");
  CHECK(pretty(Term::arrow(Term::arrow(Term::var("x"), Term::var("y")), Term::var("z"))) == "(x -> y) -> z");
  CHECK(pretty(Term::neg(Term::join(Term::var("x"), Term::var("y")))) == "(x v y)'");
}

TEST_CASE("parse of pretty is the identity on 1000 random terms of depth <= 6") {
  std::mt19937_64 rng(test::seed());
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const Term t = test::random_term(rng, 6);
    const std::string text = pretty(t);
    if (!(parse_term(text) == t)) {
      ++failures;
      MESSAGE("roundtrip failed for " << text);
    }
    CHECK(t.depth() <= 6);
  }
  CHECK(failures == 0);
}

TEST_CASE("sugar agrees with its expansion on every catalog algebra") {
  const Term x = Term::var("x");
  const std::vector<std::pair<Term, Term>> pairs = {
      {parse_term("x*"), parse_term("x -> 0")},
      {parse_term("x+"), parse_term("((x')*)'")},
      {parse_term("x{1}"), parse_term("x'*")},
      {parse_term("x{2}"), parse_term("x'*'*")},
      {parse_term("x{3}"), parse_term("x'*'*'*")},
  };
  for (const auto& key : catalog::family("RDQDStSH1")) {
    const auto& a = catalog::get(key);
    for (Elem v = 0; v < static_cast<Elem>(a.size()); ++v) {
      const Assignment env{{"x", v}};
      for (const auto& [sugar, plain] : pairs) {
        CHECK(eval(a, sugar, env) == eval(a, plain, env));
        CHECK(eval(a, sugar.desugared(), env) == eval(a, sugar, env));
        CHECK(test::naive_eval(a, sugar, env) == eval(a, sugar, env));
      }
    }
  }
}

TEST_CASE("compiled, tree and naive evaluation agree on random terms") {
  std::mt19937_64 rng(test::seed() + 1);
  const std::vector<std::string> vars = {"x", "y", "z"};
  for (const auto& key : {"L5dm", "L9dp", "D1", "D3", "2bare"}) {
    const auto& a = catalog::get(key);
    const auto envs = test::all_assignments(a, vars);
    for (int i = 0; i < 40; ++i) {
      const Term t = test::random_term(rng, 5);
      const CompiledTerm c(t, vars);
      for (const auto& env : envs) {
        const std::vector<Elem> values = {env.at("x"), env.at("y"), env.at("z")};
        const Elem expect = test::naive_eval(a, t, env);
        REQUIRE(eval(a, t, env) == expect);
        REQUIRE(c.eval(a, values) == expect);
        REQUIRE(eval(a, t.desugared(), env) == expect);
      }
    }
  }
}

TEST_CASE("homomorphisms commute with evaluation") {
  std::mt19937_64 rng(test::seed() + 2);
  std::vector<Term> terms;
  for (int i = 0; i < 30; ++i) terms.push_back(test::random_term(rng, 4));
  const auto& lib = catalog::family("RDQDStSH1");
  std::size_t checked = 0;
  for (const auto& ka : {"2e", "2bare", "L1dm", "L9dm", "D1", "D2"}) {
    for (const auto& kb : lib) {
      const auto& a = catalog::get(ka);
      const auto& b = catalog::get(kb);
      for (const auto& h : find_morphisms(a, b, MorphismKind::Hom)) {
        for (const auto& t : terms) {
          for (const auto& env : test::all_assignments(a, t.variables())) {
            Assignment img;
            for (const auto& [v, x] : env) img[v] = h.image[static_cast<std::size_t>(x)];
            REQUIRE(h.image[static_cast<std::size_t>(eval(a, t, env))] == eval(b, t, img));
          }
        }
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
}
