#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crpsbin/conformal.hpp"
#include "crpsbin/cost_matrix.hpp"
#include "crpsbin/error.hpp"
#include "crpsbin/model_select.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace crpsbin;

TEST(TestCrps, ConstantBinScoresZero) {
  const auto train = SortedDataset::from_sorted({{0, 3}, {1, 3}, {2, 3}});
  const auto test = SortedDataset::from_sorted({{0.5, 3}, {1.5, 3}});
  EXPECT_EQ(test_crps(train, test, Partition{{0, 3}, 0.0}), 0.0);
}

TEST(TestCrps, TwoAtomBin) {
  const auto train = SortedDataset::from_sorted({{0, 0}, {1, 1}});
  const auto test = SortedDataset::from_sorted({{0.5, 0.5}, {0.6, 0.5}});
  EXPECT_DOUBLE_EQ(test_crps(train, test, Partition{{0, 2}, 0.0}), 0.25);
}

TEST(TestCrps, UsesBinOfEachTestPoint) {
  const auto train = SortedDataset::from_sorted({{0, 0}, {1, 0}, {2, 10}, {3, 10}});
  // x = 1.5 is exactly the cut point and belongs to the left bin.
  const auto test = SortedDataset::from_sorted({{1.5, 0}, {9, 10}});
  EXPECT_EQ(test_crps(train, test, Partition{{0, 2, 4}, 0.0}), 0.0);
}

TEST(TestCrps, InvariantToShiftAndOrder) {
  testing_support::Draw draw(51);
  std::vector<Observation> tr, te;
  for (int i = 0; i < 40; ++i) tr.push_back({draw.uniform(0, 1), draw.normal(0, 1)});
  for (int i = 0; i < 30; ++i) te.push_back({draw.uniform(0, 1), draw.normal(0, 1)});
  const auto train = SortedDataset::from_unsorted(tr);
  const auto test = SortedDataset::from_unsorted(te);
  const Partition p{{0, 13, 27, 40}, 0.0};
  const double base = test_crps(train, test, p);

  auto shifted = [](std::vector<Observation> v) {
    for (auto& o : v) o.y += 2.5;
    return SortedDataset::from_unsorted(std::move(v));
  };
  EXPECT_NEAR(test_crps(shifted(tr), shifted(te), p), base, 1e-12);

  // Same multiset of test points in a different input order (distinct x).
  std::reverse(te.begin(), te.end());
  EXPECT_NEAR(test_crps(train, SortedDataset::from_unsorted(te), p), base, 1e-12);
}

TEST(SelectK, HeteroscedasticInteriorMinimum) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const auto ds = gen_heteroscedastic(1000, RngSeed{seed});
    const auto sel = select_k(ds);
    EXPECT_EQ(sel.kcurve.K_max, 100u);
    EXPECT_GE(sel.kcurve.K_star, 3u) << "seed " << seed;
    EXPECT_LE(sel.kcurve.K_star, 8u) << "seed " << seed;
    // U shape: both ends above the minimum.
    const double best = sel.kcurve.entries[sel.kcurve.K_star - 1].test_crps;
    EXPECT_GT(sel.kcurve.entries.front().test_crps, best);
    EXPECT_GT(sel.kcurve.entries.back().test_crps, best);
  }
}

TEST(SelectK, FaithfulCurveMatchesIndependentComputation) {
  const auto ds = load_csv(testing_support::data_dir() / "faithful.csv", "waiting", "eruptions");
  const auto sel = select_k(ds);
  EXPECT_EQ(sel.kcurve.K_max, 27u);
  // Reference values from a separate numpy implementation of the same
  // procedure (alternating split, no boundary inside tied x).
  EXPECT_NEAR(sel.kcurve.entries[1].test_crps, 0.22443, 1e-5);
  EXPECT_NEAR(sel.kcurve.entries[2].test_crps, 0.21727, 1e-5);
  EXPECT_EQ(sel.kcurve.K_star, 3u);
}

TEST(SelectK, McycleInRange) {
  const auto ds = load_csv(testing_support::data_dir() / "mcycle.csv", "times", "accel");
  const auto sel = select_k(ds);
  EXPECT_EQ(sel.kcurve.K_max, 13u);
  EXPECT_GE(sel.kcurve.K_star, 8u);
  EXPECT_LE(sel.kcurve.K_star, 12u);
}

TEST(SelectK, TiesGoToSmallerK) {
  std::vector<Observation> obs;
  for (int i = 0; i < 40; ++i) obs.push_back({static_cast<double>(i), 1.0});
  const auto sel = select_k(SortedDataset::from_sorted(obs));
  for (const auto& e : sel.kcurve.entries) EXPECT_EQ(e.test_crps, 0.0);
  EXPECT_EQ(sel.kcurve.K_star, 1u);
}

TEST(SelectK, InfeasibleKFlagged) {
  // Three distinct x values: at most three bins on the training half.
  std::vector<Observation> obs;
  testing_support::Draw draw(52);
  for (int i = 0; i < 30; ++i) obs.push_back({static_cast<double>(i % 3), draw.normal(i % 3, 1)});
  SelectOptions opts;
  opts.K_max_override = 7;
  const auto sel = select_k(SortedDataset::from_unsorted(obs), opts);
  ASSERT_EQ(sel.kcurve.entries.size(), 7u);
  for (const auto& e : sel.kcurve.entries) {
    EXPECT_EQ(e.feasible, e.K <= 3) << e.K;
    if (!e.feasible) {
      EXPECT_TRUE(std::isinf(e.test_crps));
    }
  }
  EXPECT_LE(sel.kcurve.K_star, 3u);
}

TEST(SelectK, KMaxCappedByTrainingHalf) {
  const auto ds = gen_heteroscedastic(40, RngSeed{1});
  SelectOptions opts;
  opts.K_max_override = 50;
  EXPECT_EQ(select_k(ds, opts).kcurve.K_max, 10u);
  EXPECT_EQ(default_k_max(1000, 500), 100u);
  EXPECT_EQ(default_k_max(1000, 500, 10), 50u);
}

TEST(SelectK, TooSmall) {
  const auto ds = gen_heteroscedastic(19, RngSeed{1});
  try {
    select_k(ds);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::dataset_too_small);
  }
}

TEST(SelectK, LooCurveIsFullDataDp) {
  const auto ds = gen_heteroscedastic(200, RngSeed{6});
  const auto sel = select_k(ds);
  const auto cm = precompute(ds);
  const auto cuts = ds.allowed_cuts();
  DpOptions dp;
  dp.allowed_cuts = cuts;
  const auto costs = optimal_costs(cm, sel.kcurve.K_max, dp);
  ASSERT_EQ(sel.loo.entries.size(), costs.size());
  for (std::size_t k = 0; k < costs.size(); ++k) {
    EXPECT_EQ(sel.loo.entries[k].K, k + 1);
    EXPECT_EQ(sel.loo.entries[k].dp_total, costs[k]);
  }
}

TEST(SelectK, ThreadsDoNotChangeResult) {
  const auto ds = gen_heteroscedastic(300, RngSeed{7});
  SelectOptions four;
  four.threads = 4;
  const auto a = select_k(ds);
  const auto b = select_k(ds, four);
  EXPECT_EQ(a.kcurve.K_star, b.kcurve.K_star);
  for (std::size_t i = 0; i < a.kcurve.entries.size(); ++i) {
    EXPECT_EQ(a.kcurve.entries[i].test_crps, b.kcurve.entries[i].test_crps);
  }
}

TEST(CurveCsv, HeaderAndRows) {
  const auto sel = select_k(gen_heteroscedastic(50, RngSeed{1}));
  std::ostringstream out;
  write_curve_csv(out, sel);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "K,loo_total,test_crps,feasible");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 3);
  }
  EXPECT_EQ(rows, sel.kcurve.K_max);
}
