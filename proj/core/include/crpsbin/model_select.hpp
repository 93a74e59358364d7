#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "crpsbin/conformal.hpp"
#include "crpsbin/cost_matrix.hpp"
#include "crpsbin/dataset.hpp"
#include "crpsbin/partition.hpp"

namespace crpsbin {

struct KCurveEntry {
  std::size_t K = 0;
  double test_crps = 0.0;  // +infinity when infeasible
  bool feasible = false;
};

struct KCurve {
  std::vector<KCurveEntry> entries;  // K = 1..K_max
  std::size_t K_star = 0;
  std::size_t K_max = 0;
};

struct LooCurveEntry {
  std::size_t K = 0;
  double dp_total = 0.0;
};

// Within-sample total LOO-CRPS dp[K][n] on the full data. Diagnostic only.
struct LooCurve {
  std::vector<LooCurveEntry> entries;
};

struct KSelection {
  KCurve kcurve;
  LooCurve loo;
};

struct SelectOptions {
  std::optional<std::size_t> K_max_override;
  std::size_t m_min = 2;
  bool with_loo_curve = true;
  std::size_t memory_cap_bytes = kDefaultMemoryCap;
  int threads = 1;
};

// floor(n / 10), capped by floor(n_train / m_min).
std::size_t default_k_max(std::size_t n, std::size_t n_train, std::size_t m_min = 2) noexcept;

// Mean CRPS of the held-out points against the ECDF of the training bin that
// contains each x (same locate rule as the conformal model).
double test_crps(const SortedDataset& train, const SortedDataset& test, const Partition& p);

// Alternating split; DP on the training half for every K; argmin of the test
// CRPS with ties going to the smaller K.
KSelection select_k(const SortedDataset& ds, const SelectOptions& options = {});

// Columns K,loo_total,test_crps,feasible.
void write_curve_csv(std::ostream& out, const KSelection& selection);

}  // namespace crpsbin
