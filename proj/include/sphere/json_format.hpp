#pragma once

// JSON text with every floating value printed as %.17g, keys in insertion
// order as stored by nlohmann::ordered_json.

#include <string>

#include "json.hpp"

namespace sphere {

using Json = nlohmann::ordered_json;

std::string format_double(double v);
std::string dump_json(const Json& j, int indent = 2);

}  // namespace sphere
