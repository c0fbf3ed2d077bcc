#ifndef MGPD_FIT_HPP
#define MGPD_FIT_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mgpd/common.hpp"
#include "mgpd/spectral.hpp"

namespace mgpd {

struct NelderMeadOptions {
  std::size_t max_iterations = 2000;
  double f_tol = 1e-8;
};

struct NelderMeadResult {
  Vec x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Derivative-free simplex descent (minimization).
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> x0, const NelderMeadOptions& opts = {});

/// A parametric density family for likelihood fitting. log_density receives
/// natural-scale parameters and one observation; it returns -inf outside the
/// support or the parameter box. The transform pair maps between the natural
/// box and an unconstrained search space (scales through log, shapes
/// untouched, theta through logit).
struct FitFamily {
  std::string name;
  std::vector<std::string> param_names;
  std::size_t data_dim = 1;
  std::function<double(std::span<const double>, std::span<const double>)> log_density;
  std::function<Vec(std::span<const double>)> to_unconstrained;
  std::function<Vec(std::span<const double>)> to_natural;
};

/// Univariate excess family: parameters (sigma, gamma), support x > 0.
FitFamily univariate_gp_family();

/// Exchangeable bivariate family with logistic dependence: parameters
/// (sigma, gamma, theta), common scale and shape, theta in (0, 1).
FitFamily logistic_gp_family();

struct FitOptions {
  std::size_t max_iterations = 5000;
  double loglik_tol = 1e-8;
  std::size_t restarts = 3;
};

struct FitReport {
  Vec params;
  std::vector<std::string> param_names;
  double loglik = 0.0;
  std::size_t iterations = 0;
  std::size_t restarts_used = 0;
  bool converged = false;
  /// From the inverse observed information (central differences); NaN when
  /// the Hessian is not usable.
  Vec std_errors;
};

/// Maximizes sum_i log h(x_i) over the family by restartable simplex
/// descent. Throws std::invalid_argument when the log-likelihood at init is
/// not finite.
FitReport fit_mle(const SampleBatch& data, const FitFamily& family,
                  std::span<const double> init, const FitOptions& opts = {});

}  // namespace mgpd

#endif  // MGPD_FIT_HPP
