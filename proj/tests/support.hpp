#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "crpsbin/dataset.hpp"

namespace testing_support {

inline std::filesystem::path data_dir() { return CRPSBIN_TEST_DATA_DIR; }

// Test inputs come from their own generator so oracles never share the
// library's random streams.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double normal(double mean, double sd) { return std::normal_distribution<double>(mean, sd)(eng_); }
  std::size_t integer(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_);
  }

  // Values from a rotating family: normal, uniform, exponential, bimodal,
  // and small integers (many ties).
  double mixed(std::size_t family) {
    switch (family % 5) {
      case 0: return normal(0.0, 1.0);
      case 1: return uniform(-5.0, 5.0);
      case 2: return std::exponential_distribution<double>(0.5)(eng_);
      case 3: return (uniform(0.0, 1.0) < 0.5 ? -3.0 : 3.0) + normal(0.0, 0.5);
      default: return static_cast<double>(integer(0, 6));
    }
  }

  std::vector<double> sample(std::size_t m, std::size_t family) {
    std::vector<double> out(m);
    for (auto& v : out) v = mixed(family);
    return out;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

inline crpsbin::SortedDataset dataset_from_ys(const std::vector<double>& ys) {
  std::vector<crpsbin::Observation> obs;
  for (std::size_t i = 0; i < ys.size(); ++i) obs.push_back({static_cast<double>(i), ys[i]});
  return crpsbin::SortedDataset::from_sorted(std::move(obs));
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("crpsbin-test-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

  std::filesystem::path write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name)) << text;
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support
