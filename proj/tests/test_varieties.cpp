#include <doctest.h>

#include <algorithm>

#include "shw/catalog.hpp"
#include "shw/error.hpp"
#include "shw/varieties.hpp"

using namespace shw;

namespace {

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<FiniteAlgebra> algebras(std::initializer_list<const char*> keys) {
  std::vector<FiniteAlgebra> out;
  for (const char* k : keys) out.push_back(catalog::get(k));
  return out;
}

/// Oracle: IS-closed subsets counted by testing each subset directly
/// against the embedding relation computed here.
std::uint64_t brute_force_count(const Ambient& amb) {
  const std::size_t n = amb.size();
  std::uint64_t count = 0;
  for (SimpleMask m = 0; m < (SimpleMask{1} << n); ++m) {
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i) {
      if (!((m >> i) & 1)) continue;
      for (std::size_t j = 0; j < n && closed; ++j)
        if (!((m >> j) & 1) && in_variety(amb.algebra(j), std::vector<FiniteAlgebra>{amb.algebra(i)})) closed = false;
    }
    count += closed;
  }
  return count;
}

}  // namespace

TEST_CASE("in_variety") {
  CHECK(in_variety(catalog::get("2bare"), algebras({"L9dm"})));
  CHECK_FALSE(in_variety(catalog::get("L10dm"), algebras({"D1"})));
  CHECK(in_variety(catalog::get("D2"), algebras({"D2"})));
  CHECK_THROWS_AS(in_variety(product(catalog::get("2e"), catalog::get("2e")), algebras({"D2"})), DomainError);
}

TEST_CASE("is_closure") {
  const auto all = Ambient::named("rdqdstsh1");
  CHECK(sorted(is_closure(all, {"D1", "D2", "D3"}).keys()) ==
        std::vector<std::string>{"2bare", "2e", "D1", "D2", "D3"});
  CHECK(is_closure(all, {}).empty());
  const auto rdm = Ambient::named("rdmsh1");
  CHECK(sorted(is_closure(rdm, {"L1dm"}).keys()) == std::vector<std::string>{"2e", "L1dm"});
  // Idempotent.
  const auto v = is_closure(rdm, {"L1dm", "D1"});
  CHECK(is_closure_mask(*rdm, v.mask()) == v.mask());
}

TEST_CASE("subvariety counts of the small ambients") {
  CHECK(subvariety_count(*Ambient::named("rdmsh1")) == 9504);
  CHECK(subvariety_count(*Ambient::named("rdpcsh1"), 2) == 1360);
  CHECK(subvariety_count(*Ambient::named("dqdbsh")) == brute_force_count(*Ambient::named("dqdbsh")));
  CHECK(subvariety_count(*Ambient::named("rdpcsh1")) == brute_force_count(*Ambient::named("rdpcsh1")));
}

TEST_CASE("shape specs") {
  const auto s = ShapeSpec::parse("(1+B5) x (1+B3) x B5");
  CHECK(s.cardinality() == 33 * 9 * 32);
  CHECK(ShapeSpec::parse(s.to_string()).same_factors(s));
  CHECK_THROWS(ShapeSpec::parse("(1+B5 x B3"));
}

TEST_CASE("verify_decomposition") {
  const auto rdm = Ambient::named("rdmsh1");
  const auto ok = verify_decomposition(*rdm, ShapeSpec::parse("(1+B5)x(1+B3)xB5"));
  CHECK(ok.ok);
  CHECK(ok.count == 9504);
  const auto bad = verify_decomposition(*rdm, ShapeSpec::parse("(1+B5)x(1+B5)xB5"));
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.reason.empty());
  CHECK(verify_decomposition(*Ambient::named("rdpcsh1"), ShapeSpec::parse("(1+B4)x(1+B2)xB4")).ok);
}

TEST_CASE("joins and meets of subvarieties") {
  const auto rdm = Ambient::named("rdmsh1");
  const auto c10 = is_closure(rdm, catalog::family("C10dm"));
  const auto d = is_closure(rdm, {"D1", "D2", "D3"});
  CHECK(variety_join(c10, d).mask() == rdm->full_mask());
  CHECK(variety_meet(c10, ClosedSimpleSet(rdm, 0)).empty());

  const auto all = Ambient::named("rdqdstsh1");
  const auto s1 = is_closure(all, catalog::family("S1"));
  const auto s2 = is_closure(all, catalog::family("S2"));
  // S1 members lie over 2e and S2 members over 2bare, so nothing is shared.
  CHECK(variety_meet(s1, s2).empty());
  CHECK_THROWS(variety_join(c10, s1));
  CHECK_THROWS_AS(ClosedSimpleSet(all, all->mask_of({"D1"})), DomainError);
}
