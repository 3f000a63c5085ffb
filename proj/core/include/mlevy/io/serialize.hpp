#pragma once

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "mlevy/lift/lift.hpp"
#include "mlevy/marcus/marcus.hpp"

namespace mlevy {

nlohmann::json vec_to_json(const Vec& v);
nlohmann::json mat_to_json(const Mat& m);
Vec vec_from_json(const nlohmann::json& j);
Mat mat_from_json(const nlohmann::json& j);

// JSON Lines, one record per grid point: {"t", "path", "layer", "chart",
// "x", "r"?, "jump"?}. The Euclid layer carries no chart.
void write_bundle_jsonl(std::ostream& os, const BundlePath& u, std::size_t path_index);
void write_manifold_jsonl(std::ostream& os, const ManifoldPath& x, std::size_t path_index);
void write_euclid_jsonl(std::ostream& os, const EuclidPath& y, std::size_t path_index,
                        const std::string& layer = "Y");

// CSV export drops frames: t,path,layer,chart,x0..x{d-1}
void write_manifold_csv(std::ostream& os, const ManifoldPath& x, std::size_t path_index,
                        bool header);
void write_euclid_csv(std::ostream& os, const EuclidPath& y, std::size_t path_index,
                      const std::string& layer, bool header);

} // namespace mlevy
