#include "crpsbin/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "crpsbin/crps.hpp"
#include "crpsbin/error.hpp"

namespace crpsbin {
namespace {

void require_bin(const Bin& bin) {
  if (bin.m() < 2) throw Error(Errc::bin_too_small, "conformal scores need m >= 2");
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(Errc::invalid_epsilon, "epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
}

double nearest_distance(const Bin& bin, double y) {
  const auto atoms = bin.atoms();
  auto it = std::lower_bound(atoms.begin(), atoms.end(), y);
  double best = std::numeric_limits<double>::infinity();
  if (it != atoms.end()) best = *it - y;
  if (it != atoms.begin()) best = std::min(best, y - *(it - 1));
  return best;
}

// Number of augmented scores >= the test score, the test itself included.
// For the CRPS score every augmented score is D/m - (W_aug - D)/m^2 with D the
// element's absolute-deviation sum inside the augmented set, which is
// increasing in D; comparing D values avoids rounding in the affine map.
// Exact ties in D are common (the two middle points of an even-sized sample,
// and every set endpoint), so D values within summation rounding count as
// equal.
std::size_t conforming_count(const Bin& bin, double y_h, Score score) {
  const auto atoms = bin.atoms();
  std::size_t count = 1;
  if (score.kind == ScoreKind::crps) {
    const double test = bin.abs_dev_sum(y_h);
    const double slack = 4.0 * static_cast<double>(atoms.size() + 1) *
                         std::numeric_limits<double>::epsilon() * test;
    for (std::size_t r = 0; r < atoms.size(); ++r) {
      if (bin.d(r) + std::abs(y_h - atoms[r]) >= test - slack) ++count;
    }
    return count;
  }
  if (score.k != 1) {
    throw Error(Errc::k_out_of_range, "k-NN p-values are defined for k = 1 only");
  }
  const double test = nearest_distance(bin, y_h);
  for (std::size_t r = 0; r < atoms.size(); ++r) {
    if (std::min(bin.nearest_other(r), std::abs(atoms[r] - y_h)) >= test) ++count;
  }
  return count;
}

bool included(const Bin& bin, double y, double epsilon, Score score) {
  const double p = static_cast<double>(conforming_count(bin, y, score)) /
                   static_cast<double>(bin.m() + 1);
  return p > epsilon;
}

}  // namespace

FittedModel fit(const SortedDataset& ds, std::size_t K, const FitOptions& options) {
  PrecomputeOptions pre;
  pre.exact_mode = options.exact_mode;
  pre.memory_cap_bytes = options.memory_cap_bytes;
  pre.threads = options.threads;
  const CostMatrix cm = precompute(ds, pre);
  const auto cuts = ds.allowed_cuts();
  DpOptions dp;
  dp.m_min = options.m_min;
  dp.allowed_cuts = cuts;
  dp.threads = options.threads;
  return model_from_partition(ds, optimal_partition(cm, K, dp), options.m_min);
}

FittedModel model_from_partition(const SortedDataset& ds, const Partition& p, std::size_t m_min) {
  const auto& b = p.boundaries;
  if (b.size() < 2 || b.front() != 0 || b.back() != ds.size()) {
    throw Error(Errc::invalid_boundaries, "partition does not cover the dataset");
  }
  FittedModel model;
  model.index_boundaries = b;
  model.total_cost = p.total_cost;
  model.m_min = m_min;
  for (std::size_t k = 1; k < b.size(); ++k) {
    if (b[k] <= b[k - 1]) throw Error(Errc::invalid_boundaries, "boundaries must strictly increase");
    std::vector<double> atoms;
    atoms.reserve(b[k] - b[k - 1]);
    for (std::size_t i = b[k - 1]; i < b[k]; ++i) atoms.push_back(ds[i].y);
    model.bins.emplace_back(std::move(atoms));
    if (k + 1 < b.size()) {
      const double left = ds[b[k] - 1].x;
      const double right = ds[b[k]].x;
      if (!(left < right)) {
        throw Error(Errc::invalid_boundaries, "boundary " + std::to_string(b[k]) +
                                                  " splits observations with tied x");
      }
      model.x_boundaries.push_back(left + (right - left) / 2.0);
    }
  }
  return model;
}

std::size_t locate_bin(const FittedModel& model, double x_star) noexcept {
  const auto& xb = model.x_boundaries;
  return static_cast<std::size_t>(std::lower_bound(xb.begin(), xb.end(), x_star) - xb.begin());
}

std::string Score::name() const {
  return kind == ScoreKind::crps ? std::string("crps") : "knn" + std::to_string(k);
}

double crps_score(const Bin& bin, double y_h) {
  require_bin(bin);
  return bin.crps(y_h);
}

double knn_score(const Bin& bin, double y_h, std::size_t k) {
  const auto atoms = bin.atoms();
  if (k == 0 || k > atoms.size()) {
    throw Error(Errc::k_out_of_range,
                "k = " + std::to_string(k) + " outside 1.." + std::to_string(atoms.size()));
  }
  // Merge outward from the insertion point; the k-th step is the answer.
  std::size_t right = static_cast<std::size_t>(std::lower_bound(atoms.begin(), atoms.end(), y_h) -
                                               atoms.begin());
  std::size_t left = right;
  double dist = 0.0;
  for (std::size_t step = 0; step < k; ++step) {
    const bool take_left =
        right == atoms.size() || (left > 0 && y_h - atoms[left - 1] <= atoms[right] - y_h);
    if (take_left) {
      dist = y_h - atoms[--left];
    } else {
      dist = atoms[right++] - y_h;
    }
  }
  return dist;
}

std::vector<double> augmented_scores(const Bin& bin, double y_h, Score score) {
  require_bin(bin);
  const auto atoms = bin.atoms();
  const std::size_t m = atoms.size();
  std::vector<double> out(m + 1);
  if (score.kind == ScoreKind::crps) {
    const double md = static_cast<double>(m);
    const double test = bin.abs_dev_sum(y_h);
    const double w_aug = bin.W() + test;
    auto alpha = [&](double d) { return d / md - (w_aug - d) / (md * md); };
    for (std::size_t r = 0; r < m; ++r) out[r] = alpha(bin.d(r) + std::abs(y_h - atoms[r]));
    out[m] = alpha(test);
    return out;
  }
  if (score.k != 1) throw Error(Errc::k_out_of_range, "k-NN LOO scores are defined for k = 1 only");
  for (std::size_t r = 0; r < m; ++r) {
    out[r] = std::min(bin.nearest_other(r), std::abs(atoms[r] - y_h));
  }
  out[m] = nearest_distance(bin, y_h);
  return out;
}

double p_value(const Bin& bin, double y_h, Score score) {
  require_bin(bin);
  return static_cast<double>(conforming_count(bin, y_h, score)) /
         static_cast<double>(bin.m() + 1);
}

bool granularity_floor_binds(std::size_t m, double epsilon) noexcept {
  return 1.0 / static_cast<double>(m + 1) > epsilon;
}

double PredictionSet::measure() const noexcept {
  if (whole_line) return std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (const auto& iv : intervals) total += iv.length();
  return total;
}

bool PredictionSet::contains(double y) const noexcept {
  if (whole_line) return true;
  auto it = std::upper_bound(intervals.begin(), intervals.end(), y,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  return it != intervals.begin() && y <= std::prev(it)->hi;
}

PredictionSet prediction_set(const Bin& bin, double epsilon, Score score,
                             const SearchConfig& search) {
  require_epsilon(epsilon);
  require_bin(bin);
  if (score.kind == ScoreKind::knn && score.k != 1) {
    throw Error(Errc::k_out_of_range, "k-NN prediction sets are defined for k = 1 only");
  }
  const auto atoms = bin.atoms();
  const double range = bin.max() - bin.min();
  const double magnitude = std::max(std::abs(bin.min()), std::abs(bin.max()));
  double pad = search.range_multiplier * range;
  if (!(pad > 0.0)) pad = std::max(magnitude, 1.0) * std::max(search.range_multiplier, 1.0);

  PredictionSet out;
  out.epsilon = epsilon;
  out.score = score;
  out.grid.lo = bin.min() - pad;
  out.grid.hi = bin.max() + pad;
  const double scale = std::max(range, magnitude);
  out.grid.tol = search.rel_tol * (scale > 0.0 ? scale : 1.0);

  if (granularity_floor_binds(bin.m(), epsilon)) {
    out.whole_line = true;
    return out;
  }

  std::vector<double> grid;
  const std::size_t g = std::max<std::size_t>(search.grid_points, 2);
  grid.reserve(g + 2 * atoms.size());
  for (std::size_t i = 0; i < g; ++i) {
    grid.push_back(out.grid.lo + (out.grid.hi - out.grid.lo) * static_cast<double>(i) /
                                     static_cast<double>(g - 1));
  }
  for (std::size_t r = 0; r < atoms.size(); ++r) {
    grid.push_back(atoms[r]);
    if (r + 1 < atoms.size() && atoms[r + 1] > atoms[r]) {
      grid.push_back(atoms[r] + (atoms[r + 1] - atoms[r]) / 2.0);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  out.grid.points = grid.size();

  std::vector<char> in(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) in[i] = included(bin, grid[i], epsilon, score);

  // Bisection keeps the included end, so endpoints are always members.
  auto refine = [&](double inside, double outside) {
    while (std::abs(outside - inside) > out.grid.tol) {
      const double mid = inside + (outside - inside) / 2.0;
      if (mid == inside || mid == outside) break;
      if (included(bin, mid, epsilon, score)) {
        inside = mid;
      } else {
        outside = mid;
      }
    }
    return inside;
  };

  bool open = false;
  Interval current;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (in[i] && !open) {
      current.lo = i == 0 ? grid[0] : refine(grid[i], grid[i - 1]);
      open = true;
    }
    if (open && (i + 1 == grid.size() || !in[i + 1])) {
      current.hi = i + 1 == grid.size() ? grid[i] : refine(grid[i], grid[i + 1]);
      out.intervals.push_back(current);
      open = false;
    }
  }
  return out;
}

VennBand::VennBand(std::span<const double> atoms) : atoms_(atoms.begin(), atoms.end()) {
  if (atoms_.empty()) throw Error(Errc::empty_input, "Venn band needs at least one atom");
  std::sort(atoms_.begin(), atoms_.end());
}

std::size_t VennBand::count_le(double t) const noexcept {
  return static_cast<std::size_t>(std::upper_bound(atoms_.begin(), atoms_.end(), t) -
                                  atoms_.begin());
}

double VennBand::lower(double t) const noexcept {
  return static_cast<double>(count_le(t)) / static_cast<double>(m() + 1);
}

double VennBand::upper(double t) const noexcept {
  return static_cast<double>(count_le(t) + 1) / static_cast<double>(m() + 1);
}

VennBand venn_band(std::span<const double> atoms) { return VennBand(atoms); }

std::pair<double, double> augmented_cost_identity(const Bin& bin, double y_h) {
  const auto scores = augmented_scores(bin, y_h, Score::crps());
  double lhs = 0.0;
  for (double s : scores) lhs += s;
  std::vector<double> augmented(bin.atoms().begin(), bin.atoms().end());
  augmented.push_back(y_h);
  const double rhs = bin_cost(augmented.size(), dispersion(augmented).W);
  return {lhs, rhs};
}

}  // namespace crpsbin
