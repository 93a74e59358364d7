#include "crpsbin/experiments.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "crpsbin/baseline.hpp"
#include "crpsbin/error.hpp"
#include "crpsbin/model_select.hpp"
#include "crpsbin/parallel.hpp"

#ifndef CRPSBIN_GIT_DESCRIBE
#define CRPSBIN_GIT_DESCRIBE "unknown"
#endif

namespace crpsbin {
namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe out;
  if (v.empty()) return out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  if (v.size() < 2) return out;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  return out;
}

CoverageReport placeholder(std::string method, double epsilon) {
  CoverageReport r;
  r.method = std::move(method);
  r.epsilon = epsilon;
  r.coverage = std::numeric_limits<double>::quiet_NaN();
  r.mean_measure = std::numeric_limits<double>::quiet_NaN();
  r.se_coverage = std::numeric_limits<double>::quiet_NaN();
  r.se_measure = std::numeric_limits<double>::quiet_NaN();
  r.replications = 0;
  r.status = "not_reproduced";
  return r;
}

// Coverage of one bin's set against a sample of responses.
CoverageReport score_sample(const PredictionSet& set, std::span<const double> ys) {
  CoverageReport r;
  r.epsilon = set.epsilon;
  r.n_test = ys.size();
  std::size_t hits = 0;
  for (double y : ys) hits += set.contains(y) ? 1 : 0;
  r.coverage = static_cast<double>(hits) / static_cast<double>(ys.size());
  r.se_coverage = std::sqrt(r.coverage * (1.0 - r.coverage) / static_cast<double>(ys.size()));
  if (set.whole_line) {
    r.n_wholeline = ys.size();
    r.mean_measure = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.mean_measure = set.measure();
  }
  return r;
}

}  // namespace

std::vector<PredictionSet> bin_prediction_sets(const FittedModel& model, double epsilon,
                                               Score score, const SearchConfig& search) {
  std::vector<PredictionSet> sets;
  sets.reserve(model.K());
  for (const auto& bin : model.bins) sets.push_back(prediction_set(bin, epsilon, score, search));
  return sets;
}

CoverageReport coverage_eval(const FittedModel& model, const std::vector<PredictionSet>& sets,
                             const SortedDataset& test) {
  if (sets.size() != model.K()) throw Error(Errc::invalid_argument, "one set per bin required");
  CoverageReport r;
  r.epsilon = sets.empty() ? 0.0 : sets.front().epsilon;
  r.method = sets.empty() ? std::string("crps") : sets.front().score.name();
  r.n_test = test.size();
  std::size_t hits = 0;
  std::vector<double> measures;
  measures.reserve(test.size());
  for (const auto& o : test.observations()) {
    const auto& set = sets[locate_bin(model, o.x)];
    hits += set.contains(o.y) ? 1 : 0;
    if (set.whole_line) {
      ++r.n_wholeline;
    } else {
      measures.push_back(set.measure());
    }
  }
  const double n = static_cast<double>(test.size());
  r.coverage = static_cast<double>(hits) / n;
  r.se_coverage = std::sqrt(r.coverage * (1.0 - r.coverage) / n);
  const MeanSe m = mean_se(measures);
  r.mean_measure = measures.empty() ? std::numeric_limits<double>::quiet_NaN() : m.mean;
  r.se_measure = m.se;
  return r;
}

CoverageReport coverage_eval(const FittedModel& model, const SortedDataset& test, double epsilon,
                             Score score, const SearchConfig& search) {
  return coverage_eval(model, bin_prediction_sets(model, epsilon, score, search), test);
}

CoverageReport aggregate(const std::vector<CoverageReport>& reps) {
  if (reps.empty()) throw Error(Errc::invalid_argument, "nothing to aggregate");
  CoverageReport out;
  out.method = reps.front().method;
  out.epsilon = reps.front().epsilon;
  out.n_test = reps.front().n_test;
  out.replications = reps.size();
  std::vector<double> cov, meas;
  for (const auto& r : reps) {
    cov.push_back(r.coverage);
    if (std::isfinite(r.mean_measure)) meas.push_back(r.mean_measure);
    out.n_wholeline += r.n_wholeline;
  }
  const MeanSe c = mean_se(cov);
  const MeanSe w = mean_se(meas);
  out.coverage = c.mean;
  out.se_coverage = reps.size() > 1 ? c.se : reps.front().se_coverage;
  out.mean_measure = meas.empty() ? std::numeric_limits<double>::quiet_NaN() : w.mean;
  out.se_measure = reps.size() > 1 ? w.se : reps.front().se_measure;
  return out;
}

StudyResult bimodal_study(std::size_t R, std::size_t m, std::size_t m_test, double epsilon,
                          RngSeed seed, const StudyOptions& options) {
  if (R == 0) throw Error(Errc::invalid_argument, "R must be at least 1");
  std::vector<CoverageReport> crps(R), knn(R);
  parallel_for(0, R, options.threads, [&](std::size_t r) {
    const RngSeed rep = derive_seed(seed, r);
    const Bin bin(gen_bimodal(m, derive_seed(rep, 0)));
    const auto test = gen_bimodal(m_test, derive_seed(rep, 1));
    crps[r] = score_sample(prediction_set(bin, epsilon, Score::crps(), options.search), test);
    knn[r] = score_sample(prediction_set(bin, epsilon, Score::knn(1), options.search), test);
  });
  StudyResult out;
  out.study = "bimodal";
  out.seed = seed.value;
  out.replications = R;
  out.search = options.search;
  out.rows.push_back(aggregate(crps));
  out.rows.back().method = "crps";
  out.rows.push_back(aggregate(knn));
  out.rows.back().method = "knn1";
  out.extras = {{"m", static_cast<double>(m)}, {"m_test", static_cast<double>(m_test)}};
  if (out.rows[1].mean_measure > 0.0) {
    out.extras.emplace_back("measure_ratio_crps_over_knn1",
                            out.rows[0].mean_measure / out.rows[1].mean_measure);
  }
  return out;
}

HeteroResult hetero_coverage_study(const HeteroOptions& hetero, RngSeed seed,
                                   const StudyOptions& options) {
  if (hetero.seeds == 0) throw Error(Errc::invalid_argument, "need at least one seed");
  HeteroResult out;
  out.per_seed.resize(hetero.seeds);
  std::vector<std::size_t> k_star(hetero.seeds);
  parallel_for(0, hetero.seeds, options.threads, [&](std::size_t s) {
    const RngSeed rep = derive_seed(seed, s);
    const SortedDataset train = gen_heteroscedastic(hetero.n_train, derive_seed(rep, 0));
    const SortedDataset test = gen_heteroscedastic(hetero.n_test, derive_seed(rep, 1));
    SelectOptions sel;
    sel.K_max_override = hetero.K_max_override;
    sel.with_loo_curve = false;
    k_star[s] = select_k(train, sel).kcurve.K_star;
    const FittedModel model = fit(train, k_star[s]);
    for (double eps : hetero.epsilons) {
      auto report = coverage_eval(model, test, eps, Score::crps(), options.search);
      report.method = "crps";
      out.per_seed[s].push_back(std::move(report));
    }
  });
  out.summary.study = "hetero-coverage";
  out.summary.seed = seed.value;
  out.summary.replications = hetero.seeds;
  out.summary.search = options.search;
  out.summary.k_star = k_star;
  for (std::size_t e = 0; e < hetero.epsilons.size(); ++e) {
    std::vector<CoverageReport> column;
    for (const auto& per : out.per_seed) column.push_back(per[e]);
    out.summary.rows.push_back(aggregate(column));
  }
  out.summary.extras = {{"n_train", static_cast<double>(hetero.n_train)},
                        {"n_test", static_cast<double>(hetero.n_test)}};
  return out;
}

StudyResult realdata_run(std::string_view study, const SortedDataset& ds, std::size_t R,
                         double epsilon, RngSeed seed, const StudyOptions& options) {
  if (R == 0) throw Error(Errc::invalid_argument, "R must be at least 1");
  SelectOptions no_loo;
  no_loo.with_loo_curve = false;
  const std::size_t K_full = select_k(ds, no_loo).kcurve.K_star;
  const FittedModel full_model = fit(ds, K_full);
  const auto full_sets = bin_prediction_sets(full_model, epsilon, Score::crps(), options.search);

  std::vector<CoverageReport> full(R), half(R), gaussian(R);
  std::vector<std::size_t> k_half(R);
  parallel_for(0, R, options.threads, [&](std::size_t r) {
    const SplitPair split = random_half_split(ds, derive_seed(seed, r));

    full[r] = coverage_eval(full_model, full_sets, split.test);

    k_half[r] = select_k(split.train, no_loo).kcurve.K_star;
    const FittedModel half_model = fit(split.train, k_half[r]);
    half[r] = coverage_eval(half_model, split.test, epsilon, Score::crps(), options.search);

    const SplitConformalModel base = calibrate(ols_fit(split.train), split.test, epsilon);
    CoverageReport g;
    g.epsilon = epsilon;
    g.n_test = split.test.size();
    std::size_t hits = 0;
    for (const auto& o : split.test.observations()) {
      const Interval iv = predict_interval(base, o.x);
      hits += base.whole_line || (iv.lo <= o.y && o.y <= iv.hi) ? 1 : 0;
    }
    g.coverage = static_cast<double>(hits) / static_cast<double>(g.n_test);
    g.se_coverage = std::sqrt(g.coverage * (1.0 - g.coverage) / static_cast<double>(g.n_test));
    if (base.whole_line) {
      g.n_wholeline = g.n_test;
      g.mean_measure = std::numeric_limits<double>::quiet_NaN();
    } else {
      g.mean_measure = 2.0 * base.halfwidth;
    }
    gaussian[r] = g;
  });

  StudyResult out;
  out.study = std::string(study);
  out.seed = seed.value;
  out.replications = R;
  out.search = options.search;
  out.k_star = k_half;
  out.x_boundaries = full_model.x_boundaries;
  out.rows.push_back(aggregate(full));
  out.rows.back().method = "full_n_insample_eval";
  out.rows.push_back(aggregate(half));
  out.rows.back().method = "n_half";
  out.rows.push_back(aggregate(gaussian));
  out.rows.back().method = "gaussian_split";
  out.rows.push_back(placeholder("cqr_cubic", epsilon));
  out.rows.push_back(placeholder("cqr_qrf", epsilon));
  out.extras = {{"n", static_cast<double>(ds.size())},
                {"K_star_full", static_cast<double>(K_full)}};
  return out;
}

void write_results_csv(std::ostream& out, const StudyResult& result) {
  out << "study,method,epsilon,coverage,se_coverage,mean_measure,se_measure,n_test,"
         "replications,n_wholeline,status\n";
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  auto num = [&](double v) -> std::ostream& {
    if (std::isnan(v)) return out;
    return out << v;
  };
  for (const auto& r : result.rows) {
    out << result.study << ',' << r.method << ',';
    num(r.epsilon) << ',';
    num(r.coverage) << ',';
    num(r.se_coverage) << ',';
    num(r.mean_measure) << ',';
    num(r.se_measure) << ',';
    out << r.n_test << ',' << r.replications << ',' << r.n_wholeline << ',' << r.status << '\n';
  }
  out.precision(old_precision);
}

std::string summary_json(const StudyResult& result, std::string_view config_json) {
  using nlohmann::json;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json doc;
  doc["format_version"] = 1;
  doc["study"] = result.study;
  doc["seed"] = result.seed;
  doc["replications"] = result.replications;
  doc["rng"] = std::string(Rng::kName);
  doc["build"] = std::string(build_version());
  doc["grid"] = {{"grid_points", result.search.grid_points},
                 {"range_multiplier", result.search.range_multiplier},
                 {"rel_tol", result.search.rel_tol}};
  doc["K_star"] = result.k_star;
  doc["x_boundaries"] = result.x_boundaries;
  json extras = json::object();
  for (const auto& [k, v] : result.extras) extras[k] = num(v);
  doc["extras"] = extras;
  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"method", r.method},
                    {"epsilon", r.epsilon},
                    {"coverage", num(r.coverage)},
                    {"se_coverage", num(r.se_coverage)},
                    {"mean_measure", num(r.mean_measure)},
                    {"se_measure", num(r.se_measure)},
                    {"n_test", r.n_test},
                    {"replications", r.replications},
                    {"n_wholeline", r.n_wholeline},
                    {"status", r.status}});
  }
  doc["rows"] = rows;
  doc["config"] = config_json.empty() ? json::object() : json::parse(config_json);
  return doc.dump(2);
}

std::string_view build_version() noexcept { return CRPSBIN_GIT_DESCRIBE; }

}  // namespace crpsbin
