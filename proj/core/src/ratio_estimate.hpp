#ifndef MGPD_SRC_RATIO_ESTIMATE_HPP
#define MGPD_SRC_RATIO_ESTIMATE_HPP

#include <cmath>
#include <span>
#include <stdexcept>

#include "mgpd/common.hpp"

namespace mgpd::detail {

// Ratio-of-means estimate r = mean(x)/mean(y) with a delta-method standard
// error; x and y must come from the same draws.
inline McEstimate ratio_estimate(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  const double nn = static_cast<double>(n);
  mx /= nn;
  my /= nn;
  if (!(my > 0.0)) throw std::runtime_error("ratio_estimate: denominator mean is not positive");
  const double r = mx / my;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  sxx /= nn;
  sxy /= nn;
  syy /= nn;
  const double var = (sxx - 2.0 * r * sxy + r * r * syy) / (my * my) / nn;
  return {r, std::sqrt(std::max(0.0, var)), n};
}

}  // namespace mgpd::detail

#endif  // MGPD_SRC_RATIO_ESTIMATE_HPP
