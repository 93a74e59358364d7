#include "crpsbin/crps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "crpsbin/error.hpp"

namespace crpsbin {

Ecdf::Ecdf(std::vector<double> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error(Errc::empty_ecdf, "ECDF needs at least one atom");
  for (double a : atoms_) {
    if (!std::isfinite(a)) throw Error(Errc::invalid_argument, "ECDF atoms must be finite");
  }
  std::sort(atoms_.begin(), atoms_.end());
}

double Ecdf::operator()(double t) const {
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), t);
  return static_cast<double>(it - atoms_.begin()) / static_cast<double>(atoms_.size());
}

double crps_ecdf(const Ecdf& f, double y) {
  const auto atoms = f.atoms();
  const double m = static_cast<double>(atoms.size());
  double abs_sum = 0.0;
  double w = 0.0;
  double prefix = 0.0;
  for (std::size_t r = 0; r < atoms.size(); ++r) {
    abs_sum += std::abs(atoms[r] - y);
    w += atoms[r] * static_cast<double>(r) - prefix;
    prefix += atoms[r];
  }
  return std::max(0.0, abs_sum / m - w / (m * m));
}

DispersionStats dispersion(std::span<const double> ys) {
  DispersionStats s;
  s.m = ys.size();
  s.d.assign(ys.size(), 0.0);
  if (ys.empty()) return s;

  std::vector<std::size_t> order(ys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ys[a] < ys[b]; });

  double total = 0.0;
  for (double v : ys) total += v;

  double prefix = 0.0;
  double w = 0.0;
  const double m = static_cast<double>(ys.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const double v = ys[order[r]];
    const double below = static_cast<double>(r);
    const double above = m - 1.0 - below;
    const double suffix = total - prefix - v;
    s.d[order[r]] = (v * below - prefix) + (suffix - v * above);
    w += v * below - prefix;
    prefix += v;
  }
  s.W = w;
  s.D = 2.0 * w;
  return s;
}

double loo_crps_obs(const DispersionStats& stats, std::size_t k) {
  if (stats.m < 2) throw Error(Errc::bin_too_small, "LOO CRPS needs m >= 2");
  if (k >= stats.m) throw Error(Errc::index_out_of_range, "observation index out of range");
  const double m1 = static_cast<double>(stats.m - 1);
  return stats.d[k] / m1 - (stats.D - 2.0 * stats.d[k]) / (2.0 * m1 * m1);
}

double bin_cost(std::size_t m, double W) {
  if (m < 2) throw Error(Errc::bin_too_small, "bin cost needs m >= 2");
  const double md = static_cast<double>(m);
  return md * W / ((md - 1.0) * (md - 1.0));
}

double cramer_distance(const Ecdf& f, const Ecdf& g) {
  const auto a = f.atoms();
  const auto b = g.atoms();
  const double fm = static_cast<double>(a.size());
  const double gm = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double total = 0.0;
  double prev = std::min(a.front(), b.front());
  // Both CDFs are 0 left of the first breakpoint and 1 right of the last.
  while (ia < a.size() || ib < b.size()) {
    const double next = ib == b.size() || (ia < a.size() && a[ia] <= b[ib]) ? a[ia] : b[ib];
    const double diff = static_cast<double>(ia) / fm - static_cast<double>(ib) / gm;
    total += diff * diff * (next - prev);
    while (ia < a.size() && a[ia] == next) ++ia;
    while (ib < b.size() && b[ib] == next) ++ib;
    prev = next;
  }
  return total;
}

}  // namespace crpsbin
