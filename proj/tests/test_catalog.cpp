#include <doctest.h>

#include <filesystem>

#include "shw/catalog.hpp"
#include "shw/equational.hpp"
#include "shw/error.hpp"
#include "shw/json_io.hpp"
#include "shw/structure.hpp"
#include "support.hpp"

using namespace shw;

namespace {

Elem at(const FiniteAlgebra& a, const char* x, const char* y) { return a.arrow(a.index_of(x), a.index_of(y)); }

}  // namespace

TEST_CASE("catalog keys and families") {
  CHECK(catalog::keys().size() == 2 + 10 + 2 + 10 + 10 + 3 + 1);
  CHECK(catalog::family("RDQDStSH1").size() == 25);
  CHECK(catalog::family("RDMSH1").size() == 15);
  CHECK(catalog::family("RDPCSH1").size() == 12);
  CHECK(catalog::family("DQDBSH").size() == 5);
  CHECK(catalog::family("C20").size() == 20);
  CHECK_THROWS_AS(catalog::get("L11"), InputError);
}

TEST_CASE("selected table entries") {
  const auto& l9 = catalog::get("L9");
  CHECK(l9.label(at(l9, "0", "1")) == "0");
  CHECK(l9.label(at(l9, "0", "0")) == "1");
  const auto& l5 = catalog::get("L5");
  CHECK(l5.label(at(l5, "0", "1")) == "a");
  CHECK(l5.label(at(l5, "1", "a")) == "a");
  const auto& l2 = catalog::get("L2");
  CHECK(l2.label(at(l2, "0", "a")) == "a");
  const auto& d2 = catalog::get("D2");
  CHECK(d2.label(at(d2, "0", "1")) == "1");
  const auto& d1 = catalog::get("D1");
  CHECK(d1.label(at(d1, "0", "1")) == "0");
  CHECK(d1.label(at(d1, "a", "b")) == "0");
  CHECK(d1.label(at(d1, "0", "a")) == "b");
  CHECK(d1.label(d1.neg(d1.index_of("a"))) == "a");
}

TEST_CASE("the seven-element lattice") {
  const auto& f = catalog::fig2_lattice();
  CHECK(f.size() == 7);
  CHECK_FALSE(f.has_arrow());
  CHECK_FALSE(f.has_neg());
  CHECK(f.label(f.join(f.index_of("a"), f.index_of("b"))) == "c");
  CHECK(f.label(f.meet(f.index_of("d"), f.index_of("e"))) == "c");
  CHECK(validate_lattice(f).ok());
}

TEST_CASE("every catalog simple lies in its expected classes") {
  const auto& lib = SuiteLibrary::builtin();
  for (const auto& key : catalog::family("RDQDStSH1")) {
    const auto& a = catalog::get(key);
    CHECK(satisfies_suite(a, lib.combine({"SH", "DQD", "St", "L1", "R"})).holds());
  }
  for (const auto& key : catalog::family("C10dp")) CHECK(satisfies_suite(catalog::get(key), lib.get("PC")).holds());
  for (const auto& key : {"D1", "D2", "D3"}) CHECK(satisfies_suite(catalog::get(key), lib.get("Bo")).holds());
}

TEST_CASE("base chains are semi-Heyting but carry no '") {
  const auto& lib = SuiteLibrary::builtin();
  for (int i = 1; i <= 10; ++i) {
    const auto& a = catalog::get("L" + std::to_string(i));
    CHECK(satisfies_suite(a, lib.get("SH")).holds());
    CHECK_THROWS_AS(satisfies_suite(a, lib.get("DQD")), SignatureError);
  }
}

TEST_CASE("subalgebra skeleton") {
  auto proper = [](const std::string& key) {
    const auto& a = catalog::get(key);
    std::vector<ElemSet> out;
    for (const auto& s : all_subalgebras(a))
      if (s.size() < a.size()) out.push_back(s);
    return out;
  };
  for (const auto& key : catalog::family("S1")) {
    const auto subs = proper(key);
    REQUIRE(subs.size() == 1);
    CHECK(induced_subalgebra(catalog::get(key), subs[0]).same_tables(catalog::get("2e")));
  }
  for (const auto& key : catalog::family("S2")) {
    const auto subs = proper(key);
    REQUIRE(subs.size() == 1);
    CHECK(induced_subalgebra(catalog::get(key), subs[0]).same_tables(catalog::get("2bare")));
  }
  for (const auto& key : catalog::family("S3")) CHECK(proper(key).empty());
  CHECK(proper("2e").empty());
  CHECK(proper("2bare").empty());
}

TEST_CASE("JSON export and re-import round-trip") {
  for (const auto& key : catalog::keys()) {
    const auto& a = catalog::get(key);
    CHECK(algebra_from_json(algebra_to_json(a)) == a);
  }
}

TEST_CASE("golden catalog exports match") {
  for (const auto& key : {"L1dm", "L9dm", "D1", "fig2-lattice"}) {
    const auto path = test::source_path(std::string("tests/golden/catalog/") + key + ".json");
    REQUIRE(std::filesystem::exists(path));
    CHECK(load_algebra_file(path) == catalog::get(key));
  }
}

TEST_CASE("malformed algebra JSON is rejected") {
  json j = algebra_to_json(catalog::get("2e"));
  j["join"] = json::array({json::array({0, 1}), json::array({1, 5})});
  CHECK_THROWS_AS(algebra_from_json(j), StructuralError);
  json k = algebra_to_json(catalog::get("2e"));
  k.erase("meet");
  CHECK_THROWS_AS(algebra_from_json(k), InputError);
}
