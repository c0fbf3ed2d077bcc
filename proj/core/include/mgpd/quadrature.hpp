#ifndef MGPD_QUADRATURE_HPP
#define MGPD_QUADRATURE_HPP

#include <functional>
#include <stdexcept>
#include <string>

namespace mgpd {

struct QuadratureConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  unsigned max_subdivisions = 15;
};

/// Raised when the adaptive rule cannot reach the requested tolerance;
/// carries the achieved error estimate.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& msg, double achieved)
      : std::runtime_error(msg + " (achieved error estimate " + std::to_string(achieved) + ")"),
        achieved_error(achieved) {}
  double achieved_error;
};

using ScalarFn = std::function<double(double)>;

/// Adaptive Gauss-Kronrod integral over a finite interval.
double integrate_interval(const ScalarFn& f, double a, double b,
                          const QuadratureConfig& cfg = {});

/// Integral over the whole real line. The integrand's mass is located by a
/// coarse scan, the located window is integrated adaptively, and the two
/// unbounded tails are added through the transformed rule.
double integrate_real_line(const ScalarFn& f, const QuadratureConfig& cfg = {});

/// Integral over (0, inf) via the substitution t = e^s onto the real line.
double integrate_positive_axis(const ScalarFn& f, const QuadratureConfig& cfg = {});

}  // namespace mgpd

#endif  // MGPD_QUADRATURE_HPP
