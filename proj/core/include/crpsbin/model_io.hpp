#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "crpsbin/conformal.hpp"

namespace crpsbin {

inline constexpr int kModelFormatVersion = 1;

// Versioned JSON document:
//   {format_version, m_min, K, x_boundaries[], bins[][], index_boundaries[],
//    total_cost, config{}}
// Atoms are written in shortest round-trip form. config_json must be a JSON
// object (the effective run configuration) or empty.
std::string model_to_json(const FittedModel& model, std::string_view config_json = {});
FittedModel model_from_json(std::string_view text);

void save_model(const std::filesystem::path& path, const FittedModel& model,
                std::string_view config_json = {});
FittedModel load_model(const std::filesystem::path& path);

}  // namespace crpsbin
