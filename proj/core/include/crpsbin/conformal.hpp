#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crpsbin/bin.hpp"
#include "crpsbin/cost_matrix.hpp"
#include "crpsbin/dataset.hpp"
#include "crpsbin/partition.hpp"

namespace crpsbin {

// Partition of a training set translated to x-space. Bin k covers
// (x_boundaries[k-1], x_boundaries[k]]; the outer bins extend to infinity.
struct FittedModel {
  std::vector<double> x_boundaries;
  std::vector<Bin> bins;
  std::vector<std::size_t> index_boundaries;  // 0 = b_0 < ... < b_K = n
  double total_cost = 0.0;
  std::size_t m_min = 2;

  std::size_t K() const noexcept { return bins.size(); }
};

struct FitOptions {
  std::size_t m_min = 2;
  bool exact_mode = false;
  std::size_t memory_cap_bytes = kDefaultMemoryCap;
  int threads = 1;
};

// Runs the precompute and DP on all of ds and caches per-bin statistics.
FittedModel fit(const SortedDataset& ds, std::size_t K, const FitOptions& options = {});

// Cut points are midpoints between the last x of one bin and the first x of
// the next; the partition must not split a group of tied x values.
FittedModel model_from_partition(const SortedDataset& ds, const Partition& p,
                                 std::size_t m_min = 2);

// 0-based bin index; values on a boundary belong to the left bin, values
// outside the training range are clamped to the first/last bin.
std::size_t locate_bin(const FittedModel& model, double x_star) noexcept;

enum class ScoreKind { crps, knn };

struct Score {
  ScoreKind kind = ScoreKind::crps;
  std::size_t k = 1;

  static Score crps() { return {ScoreKind::crps, 1}; }
  static Score knn(std::size_t k = 1) { return {ScoreKind::knn, k}; }
  std::string name() const;
};

double crps_score(const Bin& bin, double y_h);
// k-th smallest |y_h - atom|.
double knn_score(const Bin& bin, double y_h, std::size_t k);

// The m + 1 leave-one-out scores of the augmented set {atoms, y_h}: entry r
// belongs to the atom at sorted position r, the last entry to y_h.
std::vector<double> augmented_scores(const Bin& bin, double y_h, Score score);

// Fraction of augmented scores at least as large as the test score; values
// lie on {1/(m+1), ..., 1}. The k-NN variant is defined for k = 1 only.
double p_value(const Bin& bin, double y_h, Score score);

// True when 1/(m+1) > epsilon, i.e. m < ceil(1/epsilon) - 1: no candidate can
// be rejected and the prediction set is the whole line.
bool granularity_floor_binds(std::size_t m, double epsilon) noexcept;

struct SearchConfig {
  std::size_t grid_points = 4096;
  double range_multiplier = 1.0;
  double rel_tol = 1e-9;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
};

struct GridInfo {
  double lo = 0.0;  // searched range
  double hi = 0.0;
  std::size_t points = 0;
  double tol = 0.0;
};

struct PredictionSet {
  std::vector<Interval> intervals;  // disjoint, ascending
  double epsilon = 0.0;
  Score score;
  bool whole_line = false;
  GridInfo grid;

  // Total Lebesgue measure; infinite for whole-line sets.
  double measure() const noexcept;
  bool contains(double y) const noexcept;
};

// {y_h : p(y_h) > epsilon}, found on a grid over the padded atom range (plus
// every atom and midpoint) with crossings refined by bisection.
PredictionSet prediction_set(const Bin& bin, double epsilon, Score score,
                             const SearchConfig& search = {});

// Family of augmented ECDFs: at t with c atoms <= t the band is
// [c/(m+1), (c+1)/(m+1)].
class VennBand {
 public:
  explicit VennBand(std::span<const double> atoms);

  std::size_t m() const noexcept { return atoms_.size(); }
  std::size_t count_le(double t) const noexcept;
  double lower(double t) const noexcept;
  double upper(double t) const noexcept;
  double width() const noexcept { return 1.0 / static_cast<double>(m() + 1); }

 private:
  std::vector<double> atoms_;
};

VennBand venn_band(std::span<const double> atoms);

// Sum of the m + 1 CRPS scores of the augmented set against the closed-form
// LOO cost (m + 1) W(augmented) / m^2. Returns {lhs, rhs}.
std::pair<double, double> augmented_cost_identity(const Bin& bin, double y_h);

}  // namespace crpsbin
