#include "crpsbin/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crpsbin/error.hpp"

namespace crpsbin {

using nlohmann::json;

std::string model_to_json(const FittedModel& model, std::string_view config_json) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["m_min"] = model.m_min;
  doc["K"] = model.K();
  doc["x_boundaries"] = model.x_boundaries;
  json bins = json::array();
  for (const auto& bin : model.bins) {
    bins.push_back(std::vector<double>(bin.atoms().begin(), bin.atoms().end()));
  }
  doc["bins"] = std::move(bins);
  doc["index_boundaries"] = model.index_boundaries;
  doc["total_cost"] = model.total_cost;
  doc["config"] = config_json.empty() ? json::object() : json::parse(config_json);
  return doc.dump(2);
}

FittedModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::corrupt_model, std::string("model is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.contains("format_version") || doc.at("format_version").get<int>() != kModelFormatVersion) {
      throw Error(Errc::corrupt_model, "unsupported or missing format_version (expected " +
                                           std::to_string(kModelFormatVersion) + ")");
    }
    FittedModel model;
    model.m_min = doc.at("m_min").get<std::size_t>();
    const auto K = doc.at("K").get<std::size_t>();
    model.x_boundaries = doc.at("x_boundaries").get<std::vector<double>>();
    for (const auto& atoms : doc.at("bins")) {
      model.bins.emplace_back(atoms.get<std::vector<double>>());
    }
    if (doc.contains("index_boundaries")) {
      model.index_boundaries = doc.at("index_boundaries").get<std::vector<std::size_t>>();
    }
    if (doc.contains("total_cost") && doc.at("total_cost").is_number()) {
      model.total_cost = doc.at("total_cost").get<double>();
    }
    if (K == 0 || model.bins.size() != K || model.x_boundaries.size() + 1 != K) {
      throw Error(Errc::corrupt_model, "K, bins and x_boundaries disagree");
    }
    for (std::size_t k = 1; k < model.x_boundaries.size(); ++k) {
      if (!(model.x_boundaries[k - 1] < model.x_boundaries[k])) {
        throw Error(Errc::corrupt_model, "x_boundaries must strictly increase");
      }
    }
    for (const auto& bin : model.bins) {
      if (bin.m() < model.m_min) throw Error(Errc::corrupt_model, "bin smaller than m_min");
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(Errc::corrupt_model, std::string("malformed model document: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const FittedModel& model,
                std::string_view config_json) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
  out << model_to_json(model, config_json) << '\n';
}

FittedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::missing_file, "cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace crpsbin
