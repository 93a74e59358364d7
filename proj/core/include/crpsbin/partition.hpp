#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "crpsbin/cost_matrix.hpp"

namespace crpsbin {

// 0 = b_0 < b_1 < ... < b_K = n; bin k holds observations [b_{k-1}, b_k).
struct Partition {
  std::vector<std::size_t> boundaries;
  double total_cost = 0.0;

  std::size_t K() const noexcept { return boundaries.empty() ? 0 : boundaries.size() - 1; }
  std::size_t bin_size(std::size_t k) const { return boundaries[k + 1] - boundaries[k]; }
};

struct DpOptions {
  std::size_t m_min = 2;
  // Optional mask of length n + 1 (see SortedDataset::allowed_cuts); empty
  // allows every boundary.
  std::span<const std::uint8_t> allowed_cuts{};
  int threads = 1;
};

// Full dp/split tables for K = 1..K_max, kept for backtracking.
class DpTables {
 public:
  DpTables(std::size_t K_max, std::size_t n);

  std::size_t K_max() const noexcept { return K_max_; }
  std::size_t n() const noexcept { return n_; }

  // Minimal cost of splitting the first j observations into k bins
  // (k in 1..K_max, j in 0..n); +infinity when infeasible.
  double dp(std::size_t k, std::size_t j) const noexcept { return dp_[index(k, j)]; }
  std::size_t split(std::size_t k, std::size_t j) const noexcept { return split_[index(k, j)]; }

  bool feasible(std::size_t K) const noexcept;
  // Throws infeasible-K when no K-partition satisfies the constraints.
  Partition backtrack(std::size_t K) const;

 private:
  friend DpTables solve_dp(const CostMatrix&, std::size_t, const DpOptions&);

  std::size_t index(std::size_t k, std::size_t j) const noexcept { return (k - 1) * (n_ + 1) + j; }

  std::size_t K_max_;
  std::size_t n_;
  std::vector<double> dp_;
  std::vector<std::size_t> split_;
};

// Segment-neighbourhood DP over K = 1..K_max. Ties keep the smallest split.
DpTables solve_dp(const CostMatrix& cm, std::size_t K_max, const DpOptions& options = {});

// dp[K][n] for K = 1..K_max holding only two layers at a time.
std::vector<double> optimal_costs(const CostMatrix& cm, std::size_t K_max,
                                  const DpOptions& options = {});

Partition optimal_partition(const CostMatrix& cm, std::size_t K, const DpOptions& options = {});

struct BruteForceResult {
  Partition best;
  std::size_t optimal_count = 0;  // partitions attaining exactly best.total_cost
  std::size_t enumerated = 0;     // feasible partitions visited

  bool unique() const noexcept { return optimal_count == 1; }
};

// Exhaustive enumeration (n <= 20). Ties resolve like the DP: smallest last
// boundary first, applied recursively.
BruteForceResult brute_force_partition(const CostMatrix& cm, std::size_t K,
                                       const DpOptions& options = {});

// Sum of bin costs, accumulated left to right.
double partition_cost(const CostMatrix& cm, const Partition& p);

}  // namespace crpsbin
