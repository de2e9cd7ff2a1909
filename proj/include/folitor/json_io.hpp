#pragma once

#include <json.hpp>

#include <string>

#include "folitor/field.hpp"

namespace folitor {

using Json = nlohmann::ordered_json;

// Interchange format: {"dim": 3, "cutoff": M, "modes": [[p, m, k, re, im]...]},
// modes sorted lexicographically, zero modes omitted.  T^2 rows are
// [n1, n2, re, im].
Json field_to_json(const FourierField& field);
FourierField field_from_json(const Json& j);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace folitor
