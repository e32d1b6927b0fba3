#pragma once

#include <string>

#include "json.hpp"
#include "planetspec/profile.hpp"

namespace planetspec {

// Schema:
//   { "inner_radius": R, "interfaces": [r_1, ...],
//     "layers": [ {"model": "constant", "c": ...} | {"model": "log", "a": ..., "b": ...}
//               | {"model": "lnpoly", "coeffs": [...]}
//               | {"model": "poly", "coeffs": [...]} | {"model": "power", "c0": ..., "exponent": ...}
//               | {"model": "spline", "knots": [[r, c], ...]} | {"model": "scaled", "factor": f, "inner": {...}} ],
//     "density": optional [ {"rho": ..., "mu": optional} per layer ] }
// Throws InvalidArgument on any schema violation.
LayeredProfile profile_from_json(const nlohmann::json& j);
LayeredProfile load_profile(const std::string& path);

}  // namespace planetspec
