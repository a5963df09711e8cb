#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbcurves/frenet.hpp"
#include "pbcurves/profiles.hpp"

namespace pbcurves {

/// s, x0.., T0.., N0.., [B0..], k, [tau]; ambient coordinates.
std::vector<std::string> csv_columns(const DiscreteCurve& curve);

/// One row per node. `extra` appends a vector column (e.g. a residual field);
/// rows without a value are left empty.
void write_csv(std::ostream& out, const DiscreteCurve& curve,
               const std::string& extra_name = {}, const std::vector<Vec>& extra = {},
               const std::vector<std::size_t>& extra_nodes = {});

nlohmann::json to_json(const DiscreteCurve& curve);
nlohmann::json to_json(const CurvatureProfile& profile);
CurvatureProfile profile_from_json(const nlohmann::json& j);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace pbcurves
