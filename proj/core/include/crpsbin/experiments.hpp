#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "crpsbin/conformal.hpp"
#include "crpsbin/dataset.hpp"
#include "crpsbin/rng.hpp"

namespace crpsbin {

// Coverage and mean set measure of one method at one level.
struct CoverageReport {
  std::string method;
  double epsilon = 0.0;
  double coverage = 0.0;
  double mean_measure = 0.0;  // whole-line sets excluded
  double se_coverage = 0.0;
  double se_measure = 0.0;
  std::size_t n_test = 0;        // test points per replication
  std::size_t replications = 1;
  std::size_t n_wholeline = 0;   // whole-line sets, counted as covered
  std::string status = "ok";     // "not_reproduced" for placeholder rows
};

// One prediction set per bin of the model.
std::vector<PredictionSet> bin_prediction_sets(const FittedModel& model, double epsilon,
                                               Score score, const SearchConfig& search = {});

// Coverage against precomputed per-bin sets; SEs are binomial (coverage) and
// sd/sqrt(n) (measure) across the test points.
CoverageReport coverage_eval(const FittedModel& model, const std::vector<PredictionSet>& sets,
                             const SortedDataset& test);
CoverageReport coverage_eval(const FittedModel& model, const SortedDataset& test, double epsilon,
                             Score score, const SearchConfig& search = {});

// Mean over replications with SE = sd / sqrt(R).
CoverageReport aggregate(const std::vector<CoverageReport>& per_replication);

struct StudyResult {
  std::string study;
  std::vector<CoverageReport> rows;
  std::uint64_t seed = 0;
  std::size_t replications = 0;
  SearchConfig search;
  std::vector<std::size_t> k_star;      // per replication or seed; single entry when fixed
  std::vector<double> x_boundaries;     // of the full-data model, when there is one
  std::vector<std::pair<std::string, double>> extras;
};

struct StudyOptions {
  SearchConfig search;
  int threads = 1;
};

// R realisations of one bimodal bin (m training, m_test test draws); CRPS and
// 1-NN rows.
StudyResult bimodal_study(std::size_t R, std::size_t m, std::size_t m_test, double epsilon,
                          RngSeed seed, const StudyOptions& options = {});

struct HeteroOptions {
  std::size_t n_train = 1000;
  std::size_t n_test = 2000;
  std::vector<double> epsilons{0.05, 0.10, 0.20};
  std::size_t seeds = 20;
  std::optional<std::size_t> K_max_override;
};

// Per seed: fresh train/test draws, CV-selected K*, full-train fit, CRPS sets.
// Rows are per-epsilon means over seeds; per_seed holds the individual rows.
struct HeteroResult {
  StudyResult summary;
  std::vector<std::vector<CoverageReport>> per_seed;  // [seed][epsilon]
};

HeteroResult hetero_coverage_study(const HeteroOptions& hetero, RngSeed seed,
                                   const StudyOptions& options = {});

// R random 50/50 splits. Rows: full_n_insample_eval (K* and fit on all data,
// scored on each held-out half), n_half (CV and fit on the training half),
// gaussian_split (OLS on the training half, calibrated and scored on the
// held-out half), plus not-reproduced placeholders for cqr_cubic and cqr_qrf.
StudyResult realdata_run(std::string_view study, const SortedDataset& ds, std::size_t R,
                         double epsilon, RngSeed seed, const StudyOptions& options = {});

// Columns: study,method,epsilon,coverage,se_coverage,mean_measure,se_measure,
// n_test,replications,n_wholeline,status
void write_results_csv(std::ostream& out, const StudyResult& result);
std::string summary_json(const StudyResult& result, std::string_view config_json = {});

// git describe of the build.
std::string_view build_version() noexcept;

}  // namespace crpsbin
