#include "shw/json_io.hpp"

#include <fstream>

#include "shw/error.hpp"

namespace shw {

json algebra_to_json(const FiniteAlgebra& a) {
  json j;
  j["name"] = a.name();
  j["elements"] = a.labels();
  j["join"] = a.join_table().rows();
  j["meet"] = a.meet_table().rows();
  if (a.has_arrow()) j["arrow"] = a.arrow_table()->rows();
  if (a.has_neg()) j["neg"] = *a.neg_table();
  j["bot"] = a.bot();
  j["top"] = a.top();
  return j;
}

FiniteAlgebra algebra_from_json(const json& j) {
  try {
    auto table = [&](const char* key) {
      return BinaryTable::from_rows(j.at(key).get<std::vector<std::vector<Elem>>>());
    };
    std::optional<BinaryTable> arrow;
    if (j.contains("arrow")) arrow = table("arrow");
    std::optional<std::vector<Elem>> neg;
    if (j.contains("neg")) neg = j.at("neg").get<std::vector<Elem>>();
    return FiniteAlgebra(j.value("name", std::string("unnamed")),
                         j.at("elements").get<std::vector<std::string>>(), table("join"),
                         table("meet"), std::move(arrow), std::move(neg), j.at("bot").get<Elem>(),
                         j.at("top").get<Elem>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed algebra JSON: ") + e.what());
  }
}

FiniteAlgebra load_algebra_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return algebra_from_json(j);
}

void save_algebra_file(const FiniteAlgebra& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << algebra_to_json(a).dump(2) << "\n";
}

json labelled_map(const FiniteAlgebra& source, const FiniteAlgebra& target,
                  const std::vector<Elem>& image) {
  json j = json::object();
  for (std::size_t i = 0; i < image.size(); ++i) {
    j[source.labels()[i]] = target.label(image[i]);
  }
  return j;
}

}  // namespace shw
