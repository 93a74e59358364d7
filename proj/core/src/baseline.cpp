#include "crpsbin/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "crpsbin/error.hpp"

namespace crpsbin {

OlsModel ols_fit(const SortedDataset& train) {
  const auto obs = train.observations();
  const double n = static_cast<double>(obs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& o : obs) {
    mx += o.x;
    my += o.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& o : obs) {
    sxx += (o.x - mx) * (o.x - mx);
    sxy += (o.x - mx) * (o.y - my);
  }
  if (!(sxx > 0.0)) throw Error(Errc::degenerate_x, "OLS needs at least two distinct x values");
  OlsModel m;
  m.slope = sxy / sxx;
  m.intercept = my - m.slope * mx;
  return m;
}

std::size_t conformal_rank(std::size_t n_cal, double epsilon) {
  const double target = (1.0 - epsilon) * static_cast<double>(n_cal + 1);
  return static_cast<std::size_t>(std::ceil(target - 1e-9));
}

SplitConformalModel calibrate(const OlsModel& ols, const SortedDataset& calib, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(Errc::invalid_epsilon, "epsilon must lie in (0, 1)");
  }
  SplitConformalModel model;
  model.ols = ols;
  model.epsilon = epsilon;
  model.n_cal = calib.size();
  model.rank = conformal_rank(model.n_cal, epsilon);
  if (model.rank > model.n_cal) {
    model.whole_line = true;
    return model;
  }
  std::vector<double> residuals;
  residuals.reserve(calib.size());
  for (const auto& o : calib.observations()) residuals.push_back(std::abs(o.y - ols.predict(o.x)));
  auto nth = residuals.begin() + static_cast<std::ptrdiff_t>(model.rank - 1);
  std::nth_element(residuals.begin(), nth, residuals.end());
  model.halfwidth = *nth;
  return model;
}

Interval predict_interval(const SplitConformalModel& model, double x_star) noexcept {
  const double center = model.ols.predict(x_star);
  return {center - model.halfwidth, center + model.halfwidth};
}

}  // namespace crpsbin
