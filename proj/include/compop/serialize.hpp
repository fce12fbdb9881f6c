#pragma once

// JSON forms of weights, boundary sets and symbols. Angles are in radians and
// complex numbers are [re, im] pairs.
//
//   weight: {"family": "power", "c": 1.0, "gamma": 1.0}
//           {"family": "log_power", "beta": 2.0}
//           {"family": "custom", "table": [[t, h], ...]}
//           {"family": "zero"}
//   set:    {"arcs": [[a, b], ...]}
//           {"cantor": {"level": L, "ratio": r}}  or  {"cantor": {"ratios": [...]}}
//           {"cantor": {"logpower_levels": L}}
//   symbol: {"variant": "outer", "weight": {...}, "set": {...}}
//           {"variant": "polynomial", "coefficients": [[re, im], ...]}
//           {"variant": "scaled_rotation", "s": 0.5, "angle": 0.0}

#include <json.hpp>

#include "compop/boundary_set.hpp"
#include "compop/symbol.hpp"
#include "compop/weight.hpp"

namespace compop {

using json = nlohmann::json;

json to_json(const WeightFunction& h);
json to_json(const BoundarySet& K);
json to_json(const Symbol& phi);
json to_json(cplx z);

/// Parsers throw Error(ConfigError) naming the offending field.
WeightFunction weight_from_json(const json& j);
BoundarySet set_from_json(const json& j);
Symbol symbol_from_json(const json& j);
cplx complex_from_json(const json& j, const char* field = "complex");

}  // namespace compop
