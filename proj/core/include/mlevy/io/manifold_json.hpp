#pragma once

#include <nlohmann/json_fwd.hpp>

#include "mlevy/manifolds/catalog.hpp"

namespace mlevy {

// User-defined manifolds: {"dim": d, "charts": [{"id", "center", "radius",
// "neighbors": [{"to", "linear", "offset"}]}], "christoffel":
// "builtin:<name>" | {"per_chart": [[{"k","i","j","terms":[{"coef",
// "powers"}]}]]}, "holonomy_generators": [[...]]?}. Neighbor transitions
// are affine; symbols are polynomial tables or borrowed from a catalog
// entry.
BuiltManifold manifold_from_json(const nlohmann::json& doc);

} // namespace mlevy
