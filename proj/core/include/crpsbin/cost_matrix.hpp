#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "crpsbin/dataset.hpp"
#include "crpsbin/rng.hpp"

namespace crpsbin {

inline constexpr std::size_t kDefaultMemoryCap = std::size_t{2} << 30;  // 2 GiB

struct PrecomputeOptions {
  // Integer-scaled fixed-point dispersion sums; exact on integer-valued or
  // dyadic responses.
  bool exact_mode = false;
  bool keep_dispersion = false;
  std::size_t memory_cap_bytes = kDefaultMemoryCap;
  int threads = 1;
};

// Leave-one-out CRPS cost of every contiguous window of the x-sorted responses.
// Indices are 0-based and inclusive: cost(i, j) covers observations i..j.
// The diagonal (single-observation windows) is +infinity.
class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(std::size_t n);

  // Builds a matrix from an arbitrary cost function; used by oracles and tests.
  static CostMatrix from_function(std::size_t n,
                                  const std::function<double(std::size_t, std::size_t)>& cost);

  std::size_t n() const noexcept { return n_; }
  double cost(std::size_t i, std::size_t j) const noexcept { return cost_[offset(i, j)]; }
  // Cost of the bin holding observations [begin, end) in boundary notation.
  double segment(std::size_t begin, std::size_t end) const noexcept { return cost(begin, end - 1); }

  bool has_dispersion() const noexcept { return !w_.empty(); }
  double dispersion(std::size_t i, std::size_t j) const noexcept { return w_[offset(i, j)]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {cost_.data() + offset(i, i), n_ - i};
  }

  static std::size_t entries(std::size_t n) noexcept { return n * (n + 1) / 2; }
  static std::size_t bytes_required(std::size_t n, bool keep_dispersion) noexcept;
  // Largest n whose table fits in cap_bytes.
  static std::size_t max_n_for(std::size_t cap_bytes, bool keep_dispersion) noexcept;

  // Binary dump: magic "CRPSCM01", n as u64 LE, then the upper triangle
  // (diagonal included) row-major as f64 LE.
  void write_binary(const std::filesystem::path& path) const;
  static CostMatrix read_binary(const std::filesystem::path& path);

 private:
  friend CostMatrix precompute(std::span<const double>, const PrecomputeOptions&);

  std::size_t offset(std::size_t i, std::size_t j) const noexcept {
    return i * n_ - (i * (i - 1)) / 2 + (j - i);
  }

  std::size_t n_ = 0;
  std::vector<double> cost_;
  std::vector<double> w_;
};

CostMatrix precompute(std::span<const double> ys, const PrecomputeOptions& options = {});
CostMatrix precompute(const SortedDataset& ds, const PrecomputeOptions& options = {});

// Double-loop pairwise dispersion of observations i..j (0-based, inclusive).
double naive_W(std::span<const double> ys, std::size_t i, std::size_t j);

struct QuadrangleViolation {
  std::size_t a = 0, b = 0, c = 0, d = 0;  // 0-based, a <= b <= c <= d
  double gap = 0.0;  // c(a,c) + c(b,d) - c(a,d) - c(b,c)
};

struct QuadrangleReport {
  bool exhaustive = true;
  std::size_t quadruples_checked = 0;
  std::size_t violations = 0;
  double tolerance = 0.0;
  std::vector<QuadrangleViolation> reported;  // first max_reports violations
};

struct QuadrangleOptions {
  std::size_t exhaustive_limit = 60;
  std::size_t samples = 200000;
  RngSeed seed{0};
};

// Diagnostic only: counts quadruples breaking c(a,c) + c(b,d) <= c(a,d) + c(b,c)
// by more than 1e-9 times the largest finite cost.
QuadrangleReport check_quadrangle(const CostMatrix& cm, std::size_t max_reports,
                                  const QuadrangleOptions& options = {});

}  // namespace crpsbin
