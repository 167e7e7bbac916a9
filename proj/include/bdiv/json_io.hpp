#pragma once

#include <string>

#include <json.hpp>

#include "bdiv/model.hpp"

namespace bdiv {

// Reads and parses a JSON file; malformed input raises InputError carrying
// the parser's position message.
nlohmann::json load_json_file(const std::string& path);

// {"vertices":[{"id":"v1","cusp":"c0"},...],
//  "edges":[{"a":"v1","b":"v2","len":"1/2"},...]}
// Rationals are strings "p/q" or "n"; cusp labels are optional.
BuiltGraph graph_from_json(const nlohmann::json& doc);

// {"vertices":[{"id":"x","v":2,"cusp":"c0"},...], "edges":[["x","y"],...]}
ModelGraph model_from_json(const nlohmann::json& doc);

// A vertex name, or "e<k>@<offset>" for the point on input edge k.
GraphPoint point_from_string(const std::string& text, const BuiltGraph& built);

// [{"at":"o","c":"1"},...]
GraphDivisor divisor_from_json(const nlohmann::json& arr, const BuiltGraph& built);

}  // namespace bdiv
