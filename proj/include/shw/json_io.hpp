#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "shw/algebra.hpp"

namespace shw {

using json = nlohmann::ordered_json;

/// {"name", "elements", "join", "meet", "arrow"?, "neg"?, "bot", "top"};
/// tables are row-major lists of element indices.
json algebra_to_json(const FiniteAlgebra& a);
FiniteAlgebra algebra_from_json(const json& j);

FiniteAlgebra load_algebra_file(const std::filesystem::path& path);
void save_algebra_file(const FiniteAlgebra& a, const std::filesystem::path& path);

/// Element labels of a map image, e.g. {"0":"0","a":"b"}.
json labelled_map(const FiniteAlgebra& source, const FiniteAlgebra& target,
                  const std::vector<Elem>& image);

}  // namespace shw
