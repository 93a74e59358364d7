#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace crpsbin {

// The responses of one bin, sorted, with the prefix sums and dispersion
// terms needed to evaluate scores in O(log m).
class Bin {
 public:
  Bin() = default;
  explicit Bin(std::vector<double> atoms);

  std::size_t m() const noexcept { return atoms_.size(); }
  std::span<const double> atoms() const noexcept { return atoms_; }
  double W() const noexcept { return w_; }
  // d for the atom at sorted position r: sum of |atom_r - atom_l| over l != r.
  double d(std::size_t r) const noexcept { return d_[r]; }
  // Distance from the atom at sorted position r to its nearest other atom.
  double nearest_other(std::size_t r) const noexcept { return nn_[r]; }
  double min() const noexcept { return atoms_.front(); }
  double max() const noexcept { return atoms_.back(); }

  // sum_i |atom_i - y|
  double abs_dev_sum(double y) const noexcept;
  // Number of atoms <= t.
  std::size_t count_le(double t) const noexcept;
  // CRPS of the bin ECDF at y: abs_dev_sum(y) / m - W / m^2.
  double crps(double y) const noexcept;

 private:
  std::vector<double> atoms_;
  std::vector<double> prefix_;  // prefix_[r] = sum of the r smallest atoms
  std::vector<double> d_;
  std::vector<double> nn_;
  double w_ = 0.0;
};

}  // namespace crpsbin
