#include "crpsbin/bin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crpsbin/error.hpp"

namespace crpsbin {

Bin::Bin(std::vector<double> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error(Errc::empty_input, "a bin needs at least one atom");
  std::sort(atoms_.begin(), atoms_.end());
  const std::size_t m = atoms_.size();
  prefix_.assign(m + 1, 0.0);
  for (std::size_t r = 0; r < m; ++r) prefix_[r + 1] = prefix_[r] + atoms_[r];

  d_.assign(m, 0.0);
  nn_.assign(m, std::numeric_limits<double>::infinity());
  const double total = prefix_[m];
  for (std::size_t r = 0; r < m; ++r) {
    const double v = atoms_[r];
    const double below = static_cast<double>(r);
    const double above = static_cast<double>(m - 1 - r);
    d_[r] = (v * below - prefix_[r]) + ((total - prefix_[r + 1]) - v * above);
    w_ += v * below - prefix_[r];
    if (r > 0) nn_[r] = std::min(nn_[r], v - atoms_[r - 1]);
    if (r + 1 < m) nn_[r] = std::min(nn_[r], atoms_[r + 1] - v);
  }
}

double Bin::abs_dev_sum(double y) const noexcept {
  const std::size_t m = atoms_.size();
  const std::size_t below = count_le(y);
  const double left = y * static_cast<double>(below) - prefix_[below];
  const double right = (prefix_[m] - prefix_[below]) - y * static_cast<double>(m - below);
  return left + right;
}

std::size_t Bin::count_le(double t) const noexcept {
  return static_cast<std::size_t>(std::upper_bound(atoms_.begin(), atoms_.end(), t) -
                                  atoms_.begin());
}

double Bin::crps(double y) const noexcept {
  const double m = static_cast<double>(atoms_.size());
  return std::max(0.0, abs_dev_sum(y) / m - w_ / (m * m));
}

}  // namespace crpsbin
