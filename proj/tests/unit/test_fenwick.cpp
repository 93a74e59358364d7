#include <gtest/gtest.h>

#include <cmath>

#include "crpsbin/error.hpp"
#include "crpsbin/fenwick.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace crpsbin;

TEST(RankIndexTest, SortsAndDedupes) {
  const std::vector<double> ys{3, 1, 4, 1};
  RankIndex idx(ys);
  EXPECT_EQ(std::vector<double>(idx.values().begin(), idx.values().end()),
            (std::vector<double>{1, 3, 4}));
  EXPECT_EQ(idx.rank_of(1), 1u);
  EXPECT_EQ(idx.rank_of(4), 3u);
}

TEST(RankIndexTest, SingletonAndAllEqual) {
  const std::vector<double> one{5};
  EXPECT_EQ(RankIndex(one).size(), 1u);
  const std::vector<double> same{2, 2, 2};
  EXPECT_EQ(RankIndex(same).size(), 1u);
}

TEST(RankIndexTest, EmptyAndUnknown) {
  const std::vector<double> none;
  EXPECT_THROW(RankIndex{none}, Error);
  const std::vector<double> ys{1, 2};
  try {
    RankIndex(ys).rank_of(1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::value_not_indexed);
  }
}

TEST(DualFenwickTest, SingleInsert) {
  const std::vector<double> ys{1, 3, 4};
  RankIndex idx(ys);
  DualFenwick<double> t(idx);
  t.insert(idx, 3);
  EXPECT_EQ(t.total_count(), 1u);
  EXPECT_EQ(t.total_sum(), 3.0);
}

TEST(DualFenwickTest, DuplicatesAccumulate) {
  const std::vector<double> ys{1, 2};
  RankIndex idx(ys);
  DualFenwick<double> t(idx);
  t.insert(idx, 1);
  t.insert(idx, 1);
  EXPECT_EQ(t.query_rank(1).rank, 2u);
}

TEST(DualFenwickTest, HandCountedQuery) {
  const std::vector<double> ys{1, 3, 4};
  RankIndex idx(ys);
  DualFenwick<double> t(idx);
  for (double v : {3.0, 1.0, 4.0}) t.insert(idx, v);
  const auto q = t.rank_and_sums(idx, 3);
  EXPECT_EQ(q.rank, 2u);
  EXPECT_EQ(q.sum_le, 4.0);
  EXPECT_EQ(q.sum_gt, 4.0);
}

TEST(DualFenwickTest, EmptyTreeQuery) {
  const std::vector<double> ys{1, 3, 4};
  RankIndex idx(ys);
  DualFenwick<double> t(idx);
  const auto q = t.rank_and_sums(idx, 4);
  EXPECT_EQ(q.rank, 0u);
  EXPECT_EQ(q.sum_le, 0.0);
  EXPECT_EQ(q.sum_gt, 0.0);
}

TEST(DualFenwickTest, UnindexedValueRejected) {
  const std::vector<double> ys{1, 3};
  RankIndex idx(ys);
  DualFenwick<double> t(idx);
  EXPECT_THROW(t.insert(idx, 2), Error);
  EXPECT_THROW(t.rank_and_sums(idx, 2), Error);
}

TEST(DualFenwickTest, TotalsMatchRunningSums) {
  testing_support::Draw draw(11);
  const auto ys = draw.sample(1000, 0);
  RankIndex idx(ys);
  DualFenwick<double> t(idx);
  double sum = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    t.insert(idx, ys[i]);
    sum += ys[i];
    ASSERT_EQ(t.total_count(), i + 1);
    ASSERT_NEAR(t.total_sum(), sum, 1e-12 * (1.0 + std::abs(sum)) * static_cast<double>(i + 1));
  }
}

TEST(DualFenwickTest, MatchesLinearScan) {
  testing_support::Draw draw(12);
  for (std::size_t family = 0; family < 5; ++family) {
    const auto universe = draw.sample(500, family);
    RankIndex idx(universe);
    DualFenwick<double> t(idx);
    std::vector<double> inserted;
    for (std::size_t i = 0; i < 500; ++i) {
      const double v = universe[draw.integer(0, universe.size() - 1)];
      t.insert(idx, v);
      inserted.push_back(v);
      const double q_v = universe[draw.integer(0, universe.size() - 1)];
      const auto q = t.rank_and_sums(idx, q_v);
      const auto ref = oracle::scan(inserted, q_v);
      ASSERT_EQ(q.rank, ref.count_le);
      const double scale = 1.0 + std::abs(ref.sum_le) + std::abs(ref.sum_gt);
      ASSERT_NEAR(q.sum_le, ref.sum_le, 1e-12 * scale * 10);
      ASSERT_NEAR(q.sum_gt, ref.sum_gt, 1e-12 * scale * 10);
    }
  }
}

TEST(DualFenwickTest, IntegerSumsExact) {
  std::vector<double> ys;
  for (int i = 0; i < 64; ++i) ys.push_back(i);
  RankIndex idx(ys);
  DualFenwick<long long> t(idx);
  for (int i = 0; i < 64; ++i) t.insert_rank(idx.rank_of(i), i);
  const auto q = t.query_rank(idx.rank_of(31));
  EXPECT_EQ(q.sum_le, 31 * 32 / 2);
  EXPECT_EQ(q.sum_gt, 63 * 64 / 2 - 31 * 32 / 2);
}

TEST(DualFenwickTest, LogarithmicCellCount) {
  for (std::size_t u : {1u, 7u, 64u, 1000u, 4097u}) {
    std::vector<double> ys(u);
    for (std::size_t i = 0; i < u; ++i) ys[i] = static_cast<double>(i);
    RankIndex idx(ys);
    DualFenwick<double> t(idx);
    const auto bound = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(u)))) + 1;
    for (std::size_t r = 1; r <= u; ++r) {
      const std::size_t before = t.cells_touched();
      t.insert_rank(r, 1.0);
      ASSERT_LE(t.cells_touched() - before, bound);
      const std::size_t mid = t.cells_touched();
      (void)t.query_rank(r);
      ASSERT_LE(t.cells_touched() - mid, bound);
    }
  }
}

TEST(DualFenwickTest, ClearResets) {
  const std::vector<double> ys{1, 2, 3};
  RankIndex idx(ys);
  DualFenwick<double> t(idx);
  t.insert(idx, 2);
  t.clear();
  EXPECT_EQ(t.total_count(), 0u);
  EXPECT_EQ(t.query_rank(3).rank, 0u);
}
