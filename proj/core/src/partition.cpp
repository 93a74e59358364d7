#include "crpsbin/partition.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <string>

#include "crpsbin/error.hpp"
#include "crpsbin/parallel.hpp"

namespace crpsbin {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNoSplit = std::numeric_limits<std::size_t>::max();

void check_request(const CostMatrix& cm, std::size_t K, const DpOptions& options) {
  if (K == 0) throw Error(Errc::k_zero, "K must be at least 1");
  if (options.m_min == 0) throw Error(Errc::invalid_argument, "m_min must be at least 1");
  if (!options.allowed_cuts.empty() && options.allowed_cuts.size() != cm.n() + 1) {
    throw Error(Errc::invalid_argument, "allowed_cuts must have n + 1 entries");
  }
  if (K * options.m_min > cm.n()) {
    throw Error(Errc::infeasible_k, "K = " + std::to_string(K) + " needs n >= " +
                                        std::to_string(K * options.m_min) + " (m_min = " +
                                        std::to_string(options.m_min) + "), have n = " +
                                        std::to_string(cm.n()) + "; max feasible K = " +
                                        std::to_string(cm.n() / options.m_min));
  }
}

bool cut_ok(const DpOptions& options, std::size_t b) {
  return options.allowed_cuts.empty() || options.allowed_cuts[b] != 0;
}

double bin(const CostMatrix& cm, std::size_t begin, std::size_t end, std::size_t m_min) {
  return end - begin < m_min ? kInf : cm.segment(begin, end);
}

// One layer: next[j] = min over i of prev[i] + c(i, j); first minimiser wins.
void fill_layer(const CostMatrix& cm, std::size_t k, std::span<const double> prev,
                std::span<double> next, std::size_t* split, const DpOptions& options) {
  const std::size_t n = cm.n();
  const std::size_t m_min = options.m_min;
  std::fill(next.begin(), next.end(), kInf);
  const std::size_t j_lo = k * m_min;
  if (j_lo > n) return;
  parallel_for(j_lo, n + 1, options.threads, [&](std::size_t j) {
    if (!cut_ok(options, j)) return;
    double best = kInf;
    std::size_t arg = kNoSplit;
    for (std::size_t i = (k - 1) * m_min; i + m_min <= j; ++i) {
      const double left = prev[i];
      if (left == kInf) continue;
      const double v = left + cm.segment(i, j);
      if (v < best) {
        best = v;
        arg = i;
      }
    }
    next[j] = best;
    if (split != nullptr) split[j] = arg;
  });
}

void fill_first_layer(const CostMatrix& cm, std::span<double> layer, std::size_t* split,
                      const DpOptions& options) {
  std::fill(layer.begin(), layer.end(), kInf);
  for (std::size_t j = options.m_min; j <= cm.n(); ++j) {
    if (!cut_ok(options, j)) continue;
    layer[j] = bin(cm, 0, j, options.m_min);
    if (split != nullptr) split[j] = 0;
  }
}

}  // namespace

DpTables::DpTables(std::size_t K_max, std::size_t n)
    : K_max_(K_max), n_(n), dp_(K_max * (n + 1), kInf), split_(K_max * (n + 1), kNoSplit) {}

bool DpTables::feasible(std::size_t K) const noexcept {
  return K >= 1 && K <= K_max_ && dp(K, n_) < kInf;
}

Partition DpTables::backtrack(std::size_t K) const {
  if (K == 0) throw Error(Errc::k_zero, "K must be at least 1");
  if (K > K_max_) throw Error(Errc::infeasible_k, "K exceeds the solved K_max");
  if (!feasible(K)) {
    throw Error(Errc::infeasible_k,
                "no " + std::to_string(K) + "-partition satisfies the bin-size and cut constraints");
  }
  Partition p;
  p.boundaries.assign(K + 1, 0);
  p.boundaries[K] = n_;
  std::size_t j = n_;
  for (std::size_t k = K; k >= 1; --k) {
    j = split(k, j);
    p.boundaries[k - 1] = j;
  }
  p.total_cost = dp(K, n_);
  return p;
}

DpTables solve_dp(const CostMatrix& cm, std::size_t K_max, const DpOptions& options) {
  check_request(cm, 1, options);
  K_max = std::min(K_max, cm.n() / options.m_min);
  if (K_max == 0) throw Error(Errc::k_zero, "K_max must be at least 1");
  DpTables t(K_max, cm.n());
  const std::size_t width = cm.n() + 1;
  fill_first_layer(cm, {t.dp_.data(), width}, t.split_.data(), options);
  for (std::size_t k = 2; k <= K_max; ++k) {
    fill_layer(cm, k, {t.dp_.data() + t.index(k - 1, 0), width},
               {t.dp_.data() + t.index(k, 0), width}, t.split_.data() + t.index(k, 0), options);
  }
  return t;
}

std::vector<double> optimal_costs(const CostMatrix& cm, std::size_t K_max,
                                  const DpOptions& options) {
  check_request(cm, 1, options);
  K_max = std::min(K_max, cm.n() / options.m_min);
  if (K_max == 0) throw Error(Errc::k_zero, "K_max must be at least 1");
  const std::size_t width = cm.n() + 1;
  std::vector<double> prev(width), next(width);
  std::vector<double> out;
  out.reserve(K_max);
  fill_first_layer(cm, prev, nullptr, options);
  out.push_back(prev[cm.n()]);
  for (std::size_t k = 2; k <= K_max; ++k) {
    fill_layer(cm, k, prev, next, nullptr, options);
    out.push_back(next[cm.n()]);
    std::swap(prev, next);
  }
  return out;
}

Partition optimal_partition(const CostMatrix& cm, std::size_t K, const DpOptions& options) {
  check_request(cm, K, options);
  return solve_dp(cm, K, options).backtrack(K);
}

BruteForceResult brute_force_partition(const CostMatrix& cm, std::size_t K,
                                       const DpOptions& options) {
  if (cm.n() > 20) {
    throw Error(Errc::n_too_large_for_oracle,
                "exhaustive search is limited to n <= 20, got " + std::to_string(cm.n()));
  }
  check_request(cm, K, options);
  const std::size_t n = cm.n();
  const std::size_t m_min = options.m_min;

  BruteForceResult result;
  result.best.total_cost = kInf;
  std::vector<std::size_t> current{0};

  // Candidates are visited with boundaries in lexicographic order; since the
  // order compares b_{K-1} last, ties are settled by comparing boundary
  // vectors from the back.
  auto better_tie = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  };

  std::function<void(std::size_t, double)> recurse = [&](std::size_t start, double acc) {
    const std::size_t placed = current.size() - 1;
    if (placed == K - 1) {
      if (n - start < m_min) return;
      const double total = acc + cm.segment(start, n);
      current.push_back(n);
      ++result.enumerated;
      if (total < result.best.total_cost) {
        result.best = {current, total};
        result.optimal_count = 1;
      } else if (total == result.best.total_cost && total < kInf) {
        ++result.optimal_count;
        if (better_tie(current, result.best.boundaries)) result.best.boundaries = current;
      }
      current.pop_back();
      return;
    }
    const std::size_t remaining_bins = K - placed;
    for (std::size_t b = start + m_min; b + (remaining_bins - 1) * m_min <= n; ++b) {
      if (!cut_ok(options, b)) continue;
      current.push_back(b);
      recurse(b, placed == 0 ? cm.segment(start, b) : acc + cm.segment(start, b));
      current.pop_back();
    }
  };
  if (K == 1) {
    current.push_back(n);
    result.best = {current, cm.segment(0, n)};
    result.optimal_count = 1;
    result.enumerated = 1;
    return result;
  }
  recurse(0, 0.0);
  if (result.best.total_cost == kInf) {
    throw Error(Errc::infeasible_k, "no feasible " + std::to_string(K) + "-partition");
  }
  return result;
}

double partition_cost(const CostMatrix& cm, const Partition& p) {
  const auto& b = p.boundaries;
  if (b.size() < 2 || b.front() != 0 || b.back() != cm.n()) {
    throw Error(Errc::invalid_boundaries, "boundaries must run from 0 to n");
  }
  for (std::size_t k = 1; k < b.size(); ++k) {
    if (b[k] <= b[k - 1]) throw Error(Errc::invalid_boundaries, "boundaries must strictly increase");
  }
  double total = cm.segment(b[0], b[1]);
  for (std::size_t k = 2; k < b.size(); ++k) total += cm.segment(b[k - 1], b[k]);
  return total;
}

}  // namespace crpsbin
