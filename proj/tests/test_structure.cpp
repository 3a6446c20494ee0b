#include <doctest.h>

#include <algorithm>
#include <set>

#include "shw/catalog.hpp"
#include "shw/error.hpp"
#include "shw/structure.hpp"
#include "support.hpp"

using namespace shw;

namespace {

ElemSet labels_to_set(const FiniteAlgebra& a, std::initializer_list<const char*> labels) {
  ElemSet s;
  for (const char* l : labels) s.push_back(a.index_of(l));
  std::sort(s.begin(), s.end());
  return s;
}

FiniteAlgebra trivial_algebra() {
  return FiniteAlgebra("T", {"0"}, BinaryTable(1, {0}), BinaryTable(1, {0}), BinaryTable(1, {0}),
                       std::vector<Elem>{0}, 0, 0);
}

/// Oracle: all maps a -> b checked by brute force.
std::vector<std::vector<Elem>> brute_force_homs(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> img(a.size(), 0);
  while (true) {
    if (preserves_operations(a, b, img)) out.push_back(img);
    std::size_t i = img.size();
    while (i > 0 && ++img[i - 1] == static_cast<Elem>(b.size())) img[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

}  // namespace

TEST_CASE("subuniverse_closure") {
  const auto& l5 = catalog::get("L5dm");
  CHECK(subuniverse_closure(l5, std::vector<Elem>{}) == labels_to_set(l5, {"0", "a", "1"}));
  const auto& d2 = catalog::get("D2");
  CHECK(subuniverse_closure(d2, std::vector<Elem>{}) == labels_to_set(d2, {"0", "1"}));
  const ElemSet all = labels_to_set(d2, {"0", "1", "a", "b"});
  CHECK(subuniverse_closure(d2, all) == all);
}

TEST_CASE("all_subalgebras") {
  const auto& d1 = catalog::get("D1");
  const auto subs = all_subalgebras(d1);
  REQUIRE(subs.size() == 2);
  CHECK(subs[0] == labels_to_set(d1, {"0", "1"}));
  CHECK(is_isomorphic(induced_subalgebra(d1, subs[0]), catalog::get("2bare")));
  CHECK(all_subalgebras(catalog::get("L6dp")).size() == 1);
  CHECK(all_subalgebras(catalog::get("2e")).size() == 1);
}

TEST_CASE("all_subalgebras agrees with a brute-force subset scan") {
  for (const auto& key : catalog::keys()) {
    const auto& a = catalog::get(key);
    auto expect = test::brute_force_subuniverses(a);
    auto got = all_subalgebras(a);
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    CHECK_MESSAGE(got == expect, key);
  }
}

TEST_CASE("find_morphisms") {
  const auto emb = find_morphisms(catalog::get("2e"), catalog::get("L1dm"), MorphismKind::Embedding);
  REQUIRE(emb.size() == 1);
  CHECK(emb[0].image == std::vector<Elem>{0, 2});
  CHECK(find_morphisms(catalog::get("L1dm"), catalog::get("L2dm"), MorphismKind::Hom).empty());
  CHECK(find_morphisms(catalog::get("2e"), catalog::get("2bare"), MorphismKind::Hom).empty());
}

TEST_CASE("automorphisms of D1 include the swap of a and b") {
  // Read off the tables: a->b and b->a are both 0, 0->a = b and 0->b = a,
  // and ' fixes a and b, so exchanging a and b preserves everything.
  const auto& d1 = catalog::get("D1");
  const auto autos = automorphisms(d1);
  REQUIRE(autos.size() == 2);
  CHECK(autos[0].image == std::vector<Elem>{0, 1, 2, 3});
  CHECK(autos[1].image == std::vector<Elem>{0, 1, 3, 2});
  CHECK(automorphisms(catalog::get("D3")).size() == 1);
}

TEST_CASE("find_morphisms agrees with a brute-force map scan") {
  const std::vector<std::string> keys = {"2e", "2bare", "L1dm", "L3dp", "L9dm", "D1", "D2", "D3"};
  for (const auto& ka : keys) {
    for (const auto& kb : keys) {
      const auto& a = catalog::get(ka);
      const auto& b = catalog::get(kb);
      std::vector<std::vector<Elem>> got;
      for (const auto& m : find_morphisms(a, b, MorphismKind::Hom)) {
        got.push_back(m.image);
        CHECK(m.injective == (std::set<Elem>(m.image.begin(), m.image.end()).size() == m.image.size()));
      }
      CHECK_MESSAGE(got == brute_force_homs(a, b), ka << " -> " << kb);
    }
  }
}

TEST_CASE("congruence lattices") {
  const auto& l1 = catalog::get("L1dm");
  const auto cons = congruence_lattice(l1);
  REQUIRE(cons.size() == 2);
  CHECK(cons[0].is_identity());
  CHECK(cons[1].is_total());
  CHECK(congruence_lattice(catalog::get("2e")).size() == 2);

  const auto p = product(l1, l1);
  const auto pcons = congruence_lattice(p);
  // Kernels of the two projections.
  std::vector<Elem> k1(9), k2(9);
  for (Elem x = 0; x < 9; ++x) {
    k1[static_cast<std::size_t>(x)] = (x / 3) * 3;
    k2[static_cast<std::size_t>(x)] = x % 3;
  }
  CHECK(std::find(pcons.begin(), pcons.end(), Partition(k1)) != pcons.end());
  CHECK(std::find(pcons.begin(), pcons.end(), Partition(k2)) != pcons.end());
  CHECK(pcons.size() == 4);
  for (const auto& c : pcons) CHECK(is_compatible(p, c));
}

TEST_CASE("simplicity") {
  for (const auto& key : catalog::family("RDQDStSH1")) {
    const auto& a = catalog::get(key);
    CHECK(is_simple(a));
    CHECK(is_subdirectly_irreducible(a));
    CHECK(is_directly_indecomposable(a));
  }
  const auto p = product(catalog::get("L1dm"), catalog::get("D2"));
  CHECK_FALSE(is_simple(p));
  CHECK_FALSE(is_subdirectly_irreducible(p));
  CHECK_FALSE(is_directly_indecomposable(p));
  CHECK_FALSE(is_simple(trivial_algebra()));
}

TEST_CASE("CEP") {
  CHECK(has_cep(catalog::get("D2")));
  CHECK(has_cep(catalog::get("2e")));
  for (const auto& key : catalog::family("RDQDStSH1")) CHECK(has_cep(catalog::get(key)));
}

TEST_CASE("primality") {
  CHECK(classify_primality(catalog::get("D3")).kind == Primality::Primal);
  CHECK(classify_primality(catalog::get("2e")).kind == Primality::Primal);
  CHECK(classify_primality(catalog::get("2bare")).kind == Primality::Primal);
  CHECK(classify_primality(catalog::get("L1dm")).kind == Primality::Semiprimal);
  const auto d1 = classify_primality(catalog::get("D1"));
  CHECK(d1.kind == Primality::QuasiprimalOnly);
  CHECK(d1.nontrivial_internal_isos.size() == 1);
  for (const auto& key : catalog::family("RDQDStSH1"))
    CHECK(classify_primality(catalog::get(key)).kind != Primality::NotQuasiprimal);
  CHECK_THROWS_AS(classify_primality(product(catalog::get("2e"), catalog::get("2e"))), DomainError);
}
