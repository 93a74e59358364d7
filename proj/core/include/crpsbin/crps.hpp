#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace crpsbin {

// Empirical CDF with equally weighted atoms (multiset, kept ascending).
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> atoms);

  std::size_t size() const noexcept { return atoms_.size(); }
  std::span<const double> atoms() const noexcept { return atoms_; }
  // Fraction of atoms <= t.
  double operator()(double t) const;

 private:
  std::vector<double> atoms_;
};

// Pairwise dispersion of a bin. d[k] follows the input order.
struct DispersionStats {
  std::size_t m = 0;
  double W = 0.0;  // sum over l < r of |y_l - y_r|
  double D = 0.0;  // 2W
  std::vector<double> d;  // d[k] = sum over l != k of |y_l - y_k|
};

// (1/m) sum |y_i - y| - W / m^2.
double crps_ecdf(const Ecdf& f, double y);

// O(m log m) via sorting and prefix sums.
DispersionStats dispersion(std::span<const double> ys);

// CRPS of observation k against the ECDF of the other m - 1 values.
double loo_crps_obs(const DispersionStats& stats, std::size_t k);

// Total leave-one-out CRPS of a bin of size m >= 2: m W / (m - 1)^2.
double bin_cost(std::size_t m, double W);

// Integral of (F - G)^2 over the real line, exact for step functions.
double cramer_distance(const Ecdf& f, const Ecdf& g);

}  // namespace crpsbin
