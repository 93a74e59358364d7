#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "crpsbin/error.hpp"

namespace crpsbin {

// Rank compression of a fixed value universe: distinct values ascending,
// ranks 1..U.
class RankIndex {
 public:
  explicit RankIndex(std::span<const double> ys) : values_(ys.begin(), ys.end()) {
    if (values_.empty()) throw Error(Errc::empty_input, "cannot index an empty sequence");
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
  }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

  std::size_t rank_of(double v) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), v);
    if (it == values_.end() || *it != v) {
      throw Error(Errc::value_not_indexed, "value " + std::to_string(v) + " is not indexed");
    }
    return static_cast<std::size_t>(it - values_.begin()) + 1;
  }

 private:
  std::vector<double> values_;
};

// Count and sum Fenwick trees over ranks. Sum is double in the default path
// and a wide integer (fixed-point scaled values) in exact mode.
template <typename Sum>
class DualFenwick {
 public:
  struct Query {
    std::size_t rank = 0;  // number of inserted values <= v
    Sum sum_le{};
    Sum sum_gt{};
  };

  explicit DualFenwick(std::size_t universe) : count_(universe + 1, 0), sum_(universe + 1, Sum{}) {}
  explicit DualFenwick(const RankIndex& index) : DualFenwick(index.size()) {}

  std::size_t universe() const noexcept { return count_.size() - 1; }
  std::size_t total_count() const noexcept { return total_count_; }
  Sum total_sum() const noexcept { return total_sum_; }

  void insert_rank(std::size_t rank, Sum value) {
    check_rank(rank);
    for (std::size_t i = rank; i < count_.size(); i += i & (~i + 1)) {
      ++count_[i];
      sum_[i] += value;
      ++cells_touched_;
    }
    ++total_count_;
    total_sum_ += value;
  }

  Query query_rank(std::size_t rank) const {
    check_rank(rank);
    Query q;
    for (std::size_t i = rank; i > 0; i -= i & (~i + 1)) {
      q.rank += count_[i];
      q.sum_le += sum_[i];
      ++cells_touched_;
    }
    q.sum_gt = total_sum_ - q.sum_le;
    return q;
  }

  void insert(const RankIndex& index, double v) { insert_rank(index.rank_of(v), static_cast<Sum>(v)); }

  Query rank_and_sums(const RankIndex& index, double v) const { return query_rank(index.rank_of(v)); }

  void clear() {
    std::fill(count_.begin(), count_.end(), 0);
    std::fill(sum_.begin(), sum_.end(), Sum{});
    total_count_ = 0;
    total_sum_ = Sum{};
  }

  // Array cells read or written so far; lets tests check the O(log U) bound.
  std::size_t cells_touched() const noexcept { return cells_touched_; }

 private:
  void check_rank(std::size_t rank) const {
    if (rank == 0 || rank >= count_.size()) {
      throw Error(Errc::value_not_indexed, "rank " + std::to_string(rank) + " outside 1.." +
                                               std::to_string(count_.size() - 1));
    }
  }

  std::vector<std::size_t> count_;
  std::vector<Sum> sum_;
  std::size_t total_count_ = 0;
  Sum total_sum_{};
  mutable std::size_t cells_touched_ = 0;
};

}  // namespace crpsbin
