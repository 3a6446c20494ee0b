#include <doctest.h>

#include <algorithm>

#include "shw/algebra.hpp"
#include "shw/catalog.hpp"
#include "shw/error.hpp"

using namespace shw;

namespace {

FiniteAlgebra two_element_lattice(BinaryTable join) {
  return FiniteAlgebra("broken", {"0", "1"}, std::move(join), BinaryTable::from_rows({{0, 0}, {0, 1}}), std::nullopt,
                       std::nullopt, 0, 1);
}

}  // namespace

TEST_CASE("validate_lattice accepts the three-chain L1") {
  CHECK(validate_lattice(catalog::get("L1")).ok());
}

TEST_CASE("validate_lattice reports an absorption failure for a broken join") {
  const auto a = two_element_lattice(BinaryTable::from_rows({{0, 0}, {0, 1}}));
  const auto rep = validate_lattice(a);
  REQUIRE_FALSE(rep.ok());
  const auto it = std::find_if(rep.failures.begin(), rep.failures.end(),
                               [](const LawFailure& f) { return f.law.rfind("absorption", 0) == 0; });
  REQUIRE(it != rep.failures.end());
  // The witness really breaks absorption.
  const Elem x = it->witness[0], y = it->witness[1];
  const bool first = a.join(x, a.meet(x, y)) != x;
  const bool second = a.meet(x, a.join(x, y)) != x;
  CHECK((first || second));
}

TEST_CASE("validate_lattice accepts the seven-element lattice") {
  CHECK(validate_lattice(catalog::fig2_lattice()).ok());
}

TEST_CASE("out-of-range table entries are structural errors") {
  CHECK_THROWS_AS(two_element_lattice(BinaryTable::from_rows({{0, 1}, {1, 7}})), StructuralError);
  CHECK_THROWS_AS(BinaryTable(2, {0, 1, 1}), StructuralError);
}

TEST_CASE("expand installs ' by scheme") {
  const auto e = expand(catalog::get("2"), NegScheme::E);
  CHECK(e.neg(0) == 1);
  CHECK(e.neg(1) == 0);
  const auto& l3 = catalog::get("L3");
  const Elem a = l3.index_of("a");
  CHECK(expand(l3, NegScheme::DM).neg(a) == a);
  CHECK(expand(l3, NegScheme::DP).neg(a) == l3.top());
  CHECK(expand(l3, NegScheme::DM).same_tables(catalog::get("L3dm")));
  CHECK(expand(l3, NegScheme::DP).same_tables(catalog::get("L3dp")));
}

TEST_CASE("expand rejects schemes that refer to missing elements") {
  CHECK_THROWS_AS(expand(catalog::get("2"), NegScheme::DM), InputError);
  CHECK_THROWS_AS(expand(catalog::get("L3"), NegScheme::DMorgan4), InputError);
}

TEST_CASE("op_apply reads the tables") {
  const auto& l9 = catalog::get("L9");
  const Elem zero = 0, one = l9.index_of("1");
  CHECK(op_apply(l9, OpName::Arrow, std::vector<Elem>{zero, one}) == zero);
  const auto& d1 = catalog::get("D1");
  CHECK(op_apply(d1, OpName::Arrow, std::vector<Elem>{d1.index_of("a"), d1.index_of("b")}) == d1.index_of("0"));
  const auto& l9dm = catalog::get("L9dm");
  const Elem a = l9dm.index_of("a");
  CHECK(op_apply(l9dm, OpName::Star, std::vector<Elem>{a}) == l9dm.bot());
  CHECK(op_apply(l9dm, OpName::Plus, std::vector<Elem>{a}) == l9dm.top());
  CHECK_THROWS_AS(op_apply(l9, OpName::Neg, std::vector<Elem>{zero}), SignatureError);
}

TEST_CASE("product and induced subalgebra") {
  const auto& l1 = catalog::get("L1dm");
  const auto p = product(l1, l1);
  CHECK(p.size() == 9);
  CHECK(validate_lattice(p).ok());
  const auto sub = induced_subalgebra(l1, std::vector<Elem>{0, 2});
  CHECK(sub.size() == 2);
  CHECK(sub.same_tables(catalog::get("2e")));
}

TEST_CASE("lattice_from_order rejects an order without joins") {
  // 0 < a, 0 < b, a and b below nothing: no top.
  std::vector<std::vector<bool>> leq = {{true, true, true}, {false, true, false}, {false, false, true}};
  CHECK_THROWS_AS(lattice_from_order("v", {"0", "a", "b"}, leq), StructuralError);
}
