#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "crpsbin/rng.hpp"

namespace crpsbin {

struct Observation {
  double x = 0.0;
  double y = 0.0;
};

// Covariate-sorted sample of at least two finite observations. Immutable once
// built; ties in x keep their input order.
class SortedDataset {
 public:
  // Validates and stable-sorts by x.
  static SortedDataset from_unsorted(std::vector<Observation> obs);
  // Accepts data already in x order (verified).
  static SortedDataset from_sorted(std::vector<Observation> obs);

  std::size_t size() const noexcept { return obs_.size(); }
  std::span<const Observation> observations() const noexcept { return obs_; }
  const Observation& operator[](std::size_t i) const { return obs_[i]; }

  std::vector<double> xs() const;
  std::vector<double> ys() const;

  // allowed[b] for b in [0, n] says whether a bin boundary may sit after the
  // first b observations: never inside a group of tied x values.
  std::vector<std::uint8_t> allowed_cuts() const;

 private:
  explicit SortedDataset(std::vector<Observation> obs) : obs_(std::move(obs)) {}

  std::vector<Observation> obs_;
};

struct SplitPair {
  SortedDataset train;
  SortedDataset test;
};

// Comma-separated, one header row, '.' decimal separator. Cells may be
// double-quoted. Rows are reported 1-based counting the header as row 1.
SortedDataset load_csv(const std::filesystem::path& path, std::string_view x_col,
                       std::string_view y_col);

// train takes sorted ranks 1,3,5,... and test ranks 2,4,6,...
SplitPair alternating_split(const SortedDataset& ds);

// Uniform random split without replacement: floor(n/2) train, ceil(n/2) test.
SplitPair random_half_split(const SortedDataset& ds, RngSeed seed);

// X ~ Uniform(0, 3), Y | X = x ~ Normal(3x, (1 + x)^2).
SortedDataset gen_heteroscedastic(std::size_t n, RngSeed seed);

// i.i.d. draws from 0.5 N(-3, 0.5^2) + 0.5 N(3, 0.5^2).
std::vector<double> gen_bimodal(std::size_t m, RngSeed seed);

}  // namespace crpsbin
