#include "crpsbin/model_select.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <string>

#include "crpsbin/error.hpp"
#include "crpsbin/parallel.hpp"

namespace crpsbin {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::size_t default_k_max(std::size_t n, std::size_t n_train, std::size_t m_min) noexcept {
  return std::min(n / 10, m_min == 0 ? n_train : n_train / m_min);
}

double test_crps(const SortedDataset& train, const SortedDataset& test, const Partition& p) {
  if (test.size() == 0) throw Error(Errc::empty_test, "test set is empty");
  const FittedModel model = model_from_partition(train, p);
  double total = 0.0;
  for (const auto& o : test.observations()) {
    total += model.bins[locate_bin(model, o.x)].crps(o.y);
  }
  return total / static_cast<double>(test.size());
}

KSelection select_k(const SortedDataset& ds, const SelectOptions& options) {
  if (ds.size() < 20) {
    throw Error(Errc::dataset_too_small,
                "K selection needs n >= 20, got " + std::to_string(ds.size()));
  }
  if (options.m_min == 0) throw Error(Errc::invalid_argument, "m_min must be at least 1");
  const SplitPair split = alternating_split(ds);
  std::size_t K_max = options.K_max_override
                          ? std::min(*options.K_max_override, split.train.size() / options.m_min)
                          : default_k_max(ds.size(), split.train.size(), options.m_min);
  if (K_max == 0) throw Error(Errc::all_k_infeasible, "K_max is zero");

  PrecomputeOptions pre;
  pre.memory_cap_bytes = options.memory_cap_bytes;
  pre.threads = options.threads;
  DpOptions dp;
  dp.m_min = options.m_min;
  dp.threads = options.threads;

  const CostMatrix train_cm = precompute(split.train, pre);
  const auto train_cuts = split.train.allowed_cuts();
  dp.allowed_cuts = train_cuts;
  const DpTables tables = solve_dp(train_cm, K_max, dp);

  KSelection out;
  out.kcurve.K_max = K_max;
  out.kcurve.entries.resize(K_max);
  parallel_for(0, K_max, options.threads, [&](std::size_t idx) {
    const std::size_t K = idx + 1;
    KCurveEntry& e = out.kcurve.entries[idx];
    e.K = K;
    e.feasible = K <= tables.K_max() && tables.feasible(K);
    e.test_crps = e.feasible ? test_crps(split.train, split.test, tables.backtrack(K)) : kInf;
  });

  double best = kInf;
  for (const auto& e : out.kcurve.entries) {
    if (e.feasible && e.test_crps < best) {
      best = e.test_crps;
      out.kcurve.K_star = e.K;
    }
  }
  if (out.kcurve.K_star == 0) throw Error(Errc::all_k_infeasible, "no feasible K");

  if (options.with_loo_curve) {
    const CostMatrix full_cm = precompute(ds, pre);
    const auto full_cuts = ds.allowed_cuts();
    dp.allowed_cuts = full_cuts;
    const auto costs = optimal_costs(full_cm, K_max, dp);
    for (std::size_t k = 0; k < K_max; ++k) {
      out.loo.entries.push_back({k + 1, k < costs.size() ? costs[k] : kInf});
    }
  }
  return out;
}

void write_curve_csv(std::ostream& out, const KSelection& selection) {
  out << "K,loo_total,test_crps,feasible\n";
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < selection.kcurve.entries.size(); ++i) {
    const auto& e = selection.kcurve.entries[i];
    out << e.K << ',';
    if (i < selection.loo.entries.size()) out << selection.loo.entries[i].dp_total;
    out << ',' << e.test_crps << ',' << (e.feasible ? 1 : 0) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace crpsbin
