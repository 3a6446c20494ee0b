#include "shw/catalog.hpp"

#include <algorithm>
#include <map>

#include "shw/error.hpp"

namespace shw::catalog {

namespace {

using LabelTable = std::vector<std::vector<std::string>>;

BinaryTable table_from_labels(const std::vector<std::string>& labels, const LabelTable& rows) {
  std::vector<std::vector<Elem>> out;
  for (const auto& row : rows) {
    std::vector<Elem> r;
    for (const auto& cell : row) {
      auto it = std::find(labels.begin(), labels.end(), cell);
      if (it == labels.end()) throw StructuralError("catalog table uses unknown label " + cell);
      r.push_back(static_cast<Elem>(it - labels.begin()));
    }
    out.push_back(std::move(r));
  }
  return BinaryTable::from_rows(out);
}

FiniteAlgebra with_arrow(const FiniteAlgebra& lattice, std::string name, const LabelTable& arrow) {
  return lattice.with_arrow(table_from_labels(lattice.labels(), arrow)).renamed(std::move(name));
}

FiniteAlgebra chain(std::vector<std::string> labels) {
  std::vector<std::vector<bool>> leq(labels.size(), std::vector<bool>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = 0; j < labels.size(); ++j) leq[i][j] = i <= j;
  return lattice_from_order("chain", std::move(labels), leq);
}

FiniteAlgebra order_from_covers(std::string name, std::vector<std::string> labels,
                                const std::vector<std::pair<std::string, std::string>>& covers) {
  const std::size_t n = labels.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  auto idx = [&](const std::string& l) {
    return static_cast<std::size_t>(std::find(labels.begin(), labels.end(), l) - labels.begin());
  };
  for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
  for (const auto& [lo, hi] : covers) leq[idx(lo)][idx(hi)] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (leq[i][k] && leq[k][j]) leq[i][j] = true;
  return lattice_from_order(std::move(name), std::move(labels), leq);
}

struct Store {
  std::vector<std::string> order;
  std::map<std::string, FiniteAlgebra, std::less<>> algebras;
  std::map<std::string, std::vector<std::string>, std::less<>> families;
  std::vector<std::string> family_order;

  void add(FiniteAlgebra a) {
    order.push_back(a.name());
    algebras.emplace(a.name(), std::move(a));
  }
  void family(std::string name, std::vector<std::string> members) {
    family_order.push_back(name);
    families.emplace(std::move(name), std::move(members));
  }
};

const Store& store() {
  static const Store s = [] {
    Store st;
    const FiniteAlgebra two = chain({"0", "1"});
    const FiniteAlgebra three = chain({"0", "a", "1"});
    const FiniteAlgebra four =
        order_from_covers("B2", {"0", "1", "a", "b"}, {{"0", "a"}, {"0", "b"}, {"a", "1"}, {"b", "1"}});

    st.add(with_arrow(two, "2", {{"1", "1"}, {"0", "1"}}));
    st.add(with_arrow(two, "2bar", {{"1", "0"}, {"0", "1"}}));

    // Rows are x = 0, a, 1; columns y = 0, a, 1; entry is x -> y.
    const std::vector<LabelTable> chains = {
        {{"1", "1", "1"}, {"0", "1", "1"}, {"0", "a", "1"}},  // L1
        {{"1", "a", "1"}, {"0", "1", "1"}, {"0", "a", "1"}},  // L2
        {{"1", "1", "1"}, {"0", "1", "a"}, {"0", "a", "1"}},  // L3
        {{"1", "a", "1"}, {"0", "1", "a"}, {"0", "a", "1"}},  // L4
        {{"1", "a", "a"}, {"0", "1", "1"}, {"0", "a", "1"}},  // L5
        {{"1", "1", "a"}, {"0", "1", "1"}, {"0", "a", "1"}},  // L6
        {{"1", "a", "a"}, {"0", "1", "a"}, {"0", "a", "1"}},  // L7
        {{"1", "1", "a"}, {"0", "1", "a"}, {"0", "a", "1"}},  // L8
        {{"1", "0", "0"}, {"0", "1", "1"}, {"0", "a", "1"}},  // L9
        {{"1", "0", "0"}, {"0", "1", "a"}, {"0", "a", "1"}},  // L10
    };
    for (std::size_t i = 0; i < chains.size(); ++i) {
      st.add(with_arrow(three, "L" + std::to_string(i + 1), chains[i]));
    }

    st.add(expand(st.algebras.at("2"), NegScheme::E, "2e"));
    st.add(expand(st.algebras.at("2bar"), NegScheme::E, "2bare"));
    for (int i = 1; i <= 10; ++i) {
      const auto& base = st.algebras.at("L" + std::to_string(i));
      st.add(expand(base, NegScheme::DM, base.name() + "dm"));
    }
    for (int i = 1; i <= 10; ++i) {
      const auto& base = st.algebras.at("L" + std::to_string(i));
      st.add(expand(base, NegScheme::DP, base.name() + "dp"));
    }

    // Rows and columns in the order 0, 1, a, b.
    const std::vector<LabelTable> boolean = {
        {{"1", "0", "b", "a"}, {"0", "1", "a", "b"}, {"b", "a", "1", "0"}, {"a", "b", "0", "1"}},  // D1
        {{"1", "1", "1", "1"}, {"0", "1", "a", "b"}, {"b", "1", "1", "b"}, {"a", "1", "a", "1"}},  // D2
        {{"1", "a", "1", "a"}, {"0", "1", "a", "b"}, {"b", "a", "1", "0"}, {"a", "1", "a", "1"}},  // D3
    };
    for (std::size_t i = 0; i < boolean.size(); ++i) {
      std::string name = "D" + std::to_string(i + 1);
      st.add(expand(with_arrow(four, name, boolean[i]), NegScheme::DMorgan4, name));
    }

    st.add(order_from_covers("fig2-lattice", {"0", "a", "b", "c", "d", "e", "1"},
                             {{"0", "a"}, {"0", "b"}, {"a", "c"}, {"b", "c"}, {"c", "d"}, {"c", "e"},
                              {"d", "1"}, {"e", "1"}}));

    auto indexed = [](const std::string& suffix, std::initializer_list<int> idx) {
      std::vector<std::string> out;
      for (int i : idx) out.push_back("L" + std::to_string(i) + suffix);
      return out;
    };
    auto cat = [](std::initializer_list<std::vector<std::string>> parts) {
      std::vector<std::string> out;
      for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
      return out;
    };
    const auto c10dm = indexed("dm", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    const auto c10dp = indexed("dp", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    const std::vector<std::string> twos = {"2e", "2bare"};
    const std::vector<std::string> ds = {"D1", "D2", "D3"};
    st.family("C10dm", c10dm);
    st.family("C10dp", c10dp);
    st.family("C20", cat({c10dm, c10dp}));
    st.family("S1", cat({indexed("dm", {1, 2, 3, 4}), indexed("dp", {1, 2, 3, 4}), {"D2"}}));
    st.family("S2", cat({indexed("dm", {9, 10}), indexed("dp", {9, 10}), {"D1"}}));
    st.family("S3", cat({indexed("dm", {5, 6, 7, 8}), indexed("dp", {5, 6, 7, 8}), {"D3"}}));
    st.family("RDQDStSH1", cat({twos, c10dm, c10dp, ds}));
    st.family("RDMSH1", cat({twos, c10dm, ds}));
    st.family("RDPCSH1", cat({twos, c10dp}));
    st.family("DQDBSH", cat({twos, ds}));
    return st;
  }();
  return s;
}

}  // namespace

const FiniteAlgebra& get(std::string_view key) {
  const auto& algebras = store().algebras;
  auto it = algebras.find(key);
  if (it == algebras.end()) throw InputError("unknown catalog key '" + std::string(key) + "'");
  return it->second;
}

bool contains(std::string_view key) { return store().algebras.count(key) > 0; }

std::vector<std::string> keys() { return store().order; }

const FiniteAlgebra& fig2_lattice() { return get("fig2-lattice"); }

const std::vector<std::string>& family(std::string_view name) {
  const auto& families = store().families;
  auto it = families.find(name);
  if (it == families.end()) throw InputError("unknown family '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> family_names() { return store().family_order; }

}  // namespace shw::catalog
