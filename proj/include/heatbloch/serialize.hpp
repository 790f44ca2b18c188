#pragma once

#include "heatbloch/caloric.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace heatbloch {

/// Map document:
///   {"m": 1, "normalized": false,
///    "components": [[{"type": "poly", "coef": 1.0, "degrees": [1]},
///                    {"type": "kernel", "coef": 0.5, "source": [0.0, -1.5]}], ...]}
nlohmann::json to_json(const HeatMap& F);
HeatMap heat_map_from_json(const nlohmann::json& doc);

HeatMap load_heat_map(const std::filesystem::path& path);
void save_heat_map(const HeatMap& F, const std::filesystem::path& path);

nlohmann::json to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& arr);

}  // namespace heatbloch
