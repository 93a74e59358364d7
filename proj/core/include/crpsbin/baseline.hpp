#pragma once

#include <cstddef>

#include "crpsbin/conformal.hpp"
#include "crpsbin/dataset.hpp"

namespace crpsbin {

struct OlsModel {
  double intercept = 0.0;
  double slope = 0.0;

  double predict(double x) const noexcept { return intercept + slope * x; }
};

// Gaussian split conformal: OLS mean plus a constant half-width taken from the
// calibration absolute residuals.
struct SplitConformalModel {
  OlsModel ols;
  double halfwidth = 0.0;
  double epsilon = 0.0;
  std::size_t rank = 0;  // ceil((1 - eps)(n_cal + 1))
  std::size_t n_cal = 0;
  bool whole_line = false;  // rank > n_cal
};

OlsModel ols_fit(const SortedDataset& train);

// Rank used by split conformal; guards against ceil() of values like
// 9.000000000000002 produced by binary rounding of (1 - eps)(n + 1).
std::size_t conformal_rank(std::size_t n_cal, double epsilon);

SplitConformalModel calibrate(const OlsModel& ols, const SortedDataset& calib, double epsilon);

// [yhat - halfwidth, yhat + halfwidth]; whole-line models are not intervals
// and must be checked by the caller.
Interval predict_interval(const SplitConformalModel& model, double x_star) noexcept;

}  // namespace crpsbin
