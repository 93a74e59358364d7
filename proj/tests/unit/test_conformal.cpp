#include <gtest/gtest.h>

#include <cmath>

#include "crpsbin/conformal.hpp"
#include "crpsbin/crps.hpp"
#include "crpsbin/error.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace crpsbin;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::io_error;
}

}  // namespace

TEST(PValue, TwoAtomExamples) {
  const Bin bin({0.0, 1.0});
  EXPECT_DOUBLE_EQ(p_value(bin, 0.5, Score::crps()), 1.0);
  EXPECT_DOUBLE_EQ(p_value(bin, 10.0, Score::crps()), 1.0 / 3.0);
}

TEST(PValue, MatchesDefinition) {
  testing_support::Draw draw(61);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = draw.integer(2, 25);
    auto atoms = draw.sample(m, trial % 4);
    const Bin bin(atoms);
    const double y = draw.uniform(bin.min() - 2.0, bin.max() + 2.0);
    EXPECT_DOUBLE_EQ(p_value(bin, y, Score::crps()), oracle::p_value_crps(atoms, y)) << trial;
    EXPECT_DOUBLE_EQ(p_value(bin, y, Score::knn()), oracle::p_value_nn(atoms, y)) << trial;
  }
}

TEST(PValue, Range) {
  testing_support::Draw draw(62);
  const auto atoms = draw.sample(20, 0);
  const Bin bin(atoms);
  for (double y = -10; y <= 10; y += 0.37) {
    const double p = p_value(bin, y, Score::crps());
    EXPECT_GE(p, 1.0 / 21.0);
    EXPECT_LE(p, 1.0);
  }
}

TEST(KnnScore, Examples) {
  EXPECT_DOUBLE_EQ(knn_score(Bin({0.0, 10.0}), 4.0, 1), 4.0);
  EXPECT_DOUBLE_EQ(knn_score(Bin({0.0, 1.0, 10.0}), 2.0, 2), 2.0);
  EXPECT_DOUBLE_EQ(knn_score(Bin({0.0, 1.0, 10.0}), 2.0, 3), 8.0);
  EXPECT_EQ(code_of([] { knn_score(Bin({0.0, 1.0}), 0.0, 3); }), Errc::k_out_of_range);
  EXPECT_EQ(code_of([] { knn_score(Bin({0.0, 1.0}), 0.0, 0); }), Errc::k_out_of_range);
}

TEST(KnnScore, MatchesSortedDistances) {
  testing_support::Draw draw(63);
  for (int trial = 0; trial < 200; ++trial) {
    auto atoms = draw.sample(draw.integer(1, 30), trial);
    const double y = draw.uniform(-8, 8);
    std::vector<double> dist;
    for (double a : atoms) dist.push_back(std::abs(a - y));
    std::sort(dist.begin(), dist.end());
    const Bin bin(atoms);
    for (std::size_t k = 1; k <= atoms.size(); ++k) {
      EXPECT_DOUBLE_EQ(knn_score(bin, y, k), dist[k - 1]);
    }
  }
}

TEST(CrpsScore, IsBinCrps) {
  const std::vector<double> atoms{0.0, 1.0, 4.0};
  EXPECT_NEAR(crps_score(Bin(atoms), 2.0), oracle::crps_energy(atoms, 2.0), 1e-14);
  EXPECT_EQ(code_of([] { crps_score(Bin({1.0}), 0.0); }), Errc::bin_too_small);
}

TEST(AugmentedScores, LeaveOneOutOfAugmentedSample) {
  testing_support::Draw draw(64);
  for (int trial = 0; trial < 100; ++trial) {
    auto atoms = draw.sample(draw.integer(2, 20), trial);
    const double y = draw.uniform(-6, 6);
    const Bin bin(atoms);
    const auto scores = augmented_scores(bin, y, Score::crps());
    std::vector<double> aug(bin.atoms().begin(), bin.atoms().end());
    aug.push_back(y);
    ASSERT_EQ(scores.size(), aug.size());
    for (std::size_t j = 0; j < aug.size(); ++j) {
      EXPECT_NEAR(scores[j], oracle::crps_energy(oracle::without(aug, j), aug[j]), 1e-11);
    }
  }
}

TEST(AugmentedIdentity, Examples) {
  auto [lhs, rhs] = augmented_cost_identity(Bin({0.0, 1.0}), 0.5);
  EXPECT_NEAR(lhs, 1.5, 1e-12);
  EXPECT_NEAR(rhs, 1.5, 1e-12);
  std::tie(lhs, rhs) = augmented_cost_identity(Bin({0.0, 10.0}), 5.0);
  EXPECT_NEAR(lhs, 15.0, 1e-12);
  EXPECT_NEAR(rhs, 15.0, 1e-12);
}

TEST(AugmentedIdentity, MatchesQuadrature) {
  testing_support::Draw draw(65);
  for (int trial = 0; trial < 60; ++trial) {
    auto atoms = draw.sample(draw.integer(2, 15), trial);
    const double y = draw.uniform(-6, 6);
    const auto [lhs, rhs] = augmented_cost_identity(Bin(atoms), y);
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, rhs));
    atoms.push_back(y);
    EXPECT_NEAR(lhs, oracle::loo_total_by_quadrature(atoms), 1e-8 * std::max(1.0, rhs));
  }
}

TEST(GranularityFloor, Rule) {
  EXPECT_TRUE(granularity_floor_binds(5, 0.1));
  EXPECT_FALSE(granularity_floor_binds(9, 0.1));
  EXPECT_TRUE(granularity_floor_binds(8, 0.1));
  EXPECT_TRUE(granularity_floor_binds(2, 0.3));
  EXPECT_FALSE(granularity_floor_binds(2, 0.4));
  for (std::size_t m = 2; m < 200; ++m) {
    for (double eps : {0.01, 0.05, 0.1, 0.2, 0.25, 0.5}) {
      const double lowest = 1.0 / static_cast<double>(m + 1);
      EXPECT_EQ(granularity_floor_binds(m, eps), lowest > eps);
    }
  }
}

TEST(PredictionSet, WholeLineWhenFloorBinds) {
  const Bin bin({0.0, 1.0, 2.0, 3.0, 4.0});
  const auto set = prediction_set(bin, 0.1, Score::crps());
  EXPECT_TRUE(set.whole_line);
  EXPECT_TRUE(set.intervals.empty());
  EXPECT_TRUE(std::isinf(set.measure()));
  EXPECT_TRUE(set.contains(1e12));
}

TEST(PredictionSet, CrpsSingleIntervalAgreesWithDefinition) {
  testing_support::Draw draw(66);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = draw.integer(10, 60);
    auto atoms = draw.sample(m, trial % 4);
    const Bin bin(atoms);
    const double eps = trial % 2 ? 0.1 : 0.2;
    const auto set = prediction_set(bin, eps, Score::crps());
    ASSERT_FALSE(set.whole_line);
    ASSERT_EQ(set.intervals.size(), 1u) << trial;
    const Interval iv = set.intervals[0];
    // Endpoints sit on score ties, so probe just inside and just outside.
    const double step = 10.0 * set.grid.tol;
    EXPECT_GT(oracle::p_value_crps(atoms, iv.lo + set.grid.tol), eps);
    EXPECT_GT(oracle::p_value_crps(atoms, iv.hi - set.grid.tol), eps);
    EXPECT_LE(oracle::p_value_crps(atoms, iv.lo - step), eps);
    EXPECT_LE(oracle::p_value_crps(atoms, iv.hi + step), eps);
    for (int s = 0; s < 20; ++s) {
      const double y = draw.uniform(set.grid.lo, set.grid.hi);
      if (std::abs(y - iv.lo) < step || std::abs(y - iv.hi) < step) continue;
      EXPECT_EQ(set.contains(y), oracle::p_value_crps(atoms, y) > eps);
    }
  }
}

TEST(PredictionSet, NearestNeighbourSplitsOnBimodalData) {
  testing_support::Draw draw(67);
  std::vector<double> atoms;
  for (int i = 0; i < 50; ++i) atoms.push_back((i % 2 ? 3.0 : -3.0) + draw.normal(0, 0.5));
  const Bin bin(atoms);
  const auto set = prediction_set(bin, 0.1, Score::knn());
  // At least one interval per mode; a sparse stretch inside a mode can add more.
  ASSERT_GE(set.intervals.size(), 2u);
  EXPECT_LT(set.intervals.front().hi, 0.0);
  EXPECT_GT(set.intervals.back().lo, 0.0);
  for (const auto& iv : set.intervals) {
    EXPECT_GT(oracle::p_value_nn(atoms, iv.lo + set.grid.tol), 0.1);
    EXPECT_GT(oracle::p_value_nn(atoms, iv.hi - set.grid.tol), 0.1);
  }
  EXPECT_FALSE(set.contains(0.0));
  const auto crps = prediction_set(bin, 0.1, Score::crps());
  EXPECT_EQ(crps.intervals.size(), 1u);
  EXPECT_TRUE(crps.contains(0.0));
}

TEST(PredictionSet, TranslationEquivariant) {
  testing_support::Draw draw(68);
  auto atoms = draw.sample(40, 0);
  const auto a = prediction_set(Bin(atoms), 0.1, Score::crps());
  for (auto& v : atoms) v += 100.0;
  const auto b = prediction_set(Bin(atoms), 0.1, Score::crps());
  ASSERT_EQ(a.intervals.size(), b.intervals.size());
  for (std::size_t i = 0; i < a.intervals.size(); ++i) {
    EXPECT_NEAR(b.intervals[i].lo - 100.0, a.intervals[i].lo, 2.0 * b.grid.tol + 1e-9);
    EXPECT_NEAR(b.intervals[i].hi - 100.0, a.intervals[i].hi, 2.0 * b.grid.tol + 1e-9);
  }
}

TEST(PredictionSet, Errors) {
  const Bin bin({0.0, 1.0, 2.0});
  EXPECT_EQ(code_of([&] { prediction_set(bin, 0.0, Score::crps()); }), Errc::invalid_epsilon);
  EXPECT_EQ(code_of([&] { prediction_set(bin, 1.0, Score::crps()); }), Errc::invalid_epsilon);
  EXPECT_EQ(code_of([&] { prediction_set(bin, std::nan(""), Score::crps()); }), Errc::invalid_epsilon);
  EXPECT_EQ(code_of([&] { prediction_set(bin, 0.4, Score::knn(2)); }), Errc::k_out_of_range);
  EXPECT_EQ(code_of([] { prediction_set(Bin({1.0}), 0.4, Score::crps()); }), Errc::bin_too_small);
}

TEST(PredictionSet, ConstantBin) {
  const auto set = prediction_set(Bin(std::vector<double>(10, 2.0)), 0.1, Score::crps());
  ASSERT_EQ(set.intervals.size(), 1u);
  EXPECT_TRUE(set.contains(2.0));
  EXPECT_FALSE(set.contains(2.5));
}

TEST(VennBand, Examples) {
  const std::vector<double> atoms{1.0, 2.0, 3.0, 4.0};
  const auto band = venn_band(atoms);
  EXPECT_DOUBLE_EQ(band.lower(2.5), 0.4);
  EXPECT_DOUBLE_EQ(band.upper(2.5), 0.6);
  EXPECT_DOUBLE_EQ(band.lower(0.0), 0.0);
  EXPECT_DOUBLE_EQ(band.upper(10.0), 1.0);
  std::vector<double> big(252);
  for (std::size_t i = 0; i < big.size(); ++i) big[i] = static_cast<double>(i);
  EXPECT_DOUBLE_EQ(venn_band(big).width(), 1.0 / 253.0);
  EXPECT_EQ(code_of([] { venn_band(std::vector<double>{}); }), Errc::empty_input);
}

TEST(VennBand, BracketsEcdf) {
  testing_support::Draw draw(69);
  const auto atoms = draw.sample(30, 4);
  const auto band = venn_band(atoms);
  for (double t = -1.0; t < 8.0; t += 0.25) {
    const double F = oracle::ecdf_at(atoms, t);
    EXPECT_LE(band.lower(t), F + 1e-15);
    EXPECT_GE(band.upper(t), band.lower(t));
    EXPECT_NEAR(band.upper(t) - band.lower(t), band.width(), 1e-15);
  }
}

TEST(Fit, BoundariesAreMidpoints) {
  const auto ds = gen_heteroscedastic(300, RngSeed{3});
  const auto model = fit(ds, 5);
  ASSERT_EQ(model.bins.size(), 5u);
  ASSERT_EQ(model.x_boundaries.size(), 4u);
  std::size_t total = 0;
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_GE(model.bins[k].m(), 2u);
    total += model.bins[k].m();
  }
  EXPECT_EQ(total, 300u);
  for (std::size_t k = 1; k < 5; ++k) {
    const std::size_t b = model.index_boundaries[k];
    EXPECT_DOUBLE_EQ(model.x_boundaries[k - 1], (ds[b - 1].x + ds[b].x) / 2.0);
  }
}

TEST(Fit, NeverSplitsTiedX) {
  std::vector<Observation> obs;
  testing_support::Draw draw(70);
  for (int i = 0; i < 60; ++i) obs.push_back({static_cast<double>(i / 6), draw.normal(i / 6, 1)});
  const auto ds = SortedDataset::from_unsorted(obs);
  const auto model = fit(ds, 4);
  for (std::size_t k = 1; k + 1 < model.index_boundaries.size(); ++k) {
    EXPECT_EQ(model.index_boundaries[k] % 6, 0u);
  }
}

TEST(ModelFromPartition, RejectsSplitTies) {
  const auto ds = SortedDataset::from_sorted({{0, 1}, {1, 2}, {1, 3}, {2, 4}});
  EXPECT_EQ(code_of([&] { model_from_partition(ds, Partition{{0, 2, 4}, 0.0}); }),
            Errc::invalid_boundaries);
  EXPECT_EQ(code_of([&] { model_from_partition(ds, Partition{{0, 3}, 0.0}); }),
            Errc::invalid_boundaries);
  EXPECT_NO_THROW(model_from_partition(ds, Partition{{0, 1, 4}, 0.0}));
}

TEST(LocateBin, ClampsAndUsesLeftBoundaryRule) {
  FittedModel model;
  model.x_boundaries = {1.5, 3.5};
  EXPECT_EQ(locate_bin(model, -100.0), 0u);
  EXPECT_EQ(locate_bin(model, 1.5), 0u);
  EXPECT_EQ(locate_bin(model, 1.5000001), 1u);
  EXPECT_EQ(locate_bin(model, 3.5), 1u);
  EXPECT_EQ(locate_bin(model, 3.6), 2u);
  EXPECT_EQ(locate_bin(model, 1e9), 2u);
  FittedModel single;
  EXPECT_EQ(locate_bin(single, 42.0), 0u);
}

TEST(ScoreName, Names) {
  EXPECT_EQ(Score::crps().name(), "crps");
  EXPECT_EQ(Score::knn().name(), "knn1");
}
