#include "mgpd/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mgpd {

namespace {

constexpr double kPiConstraintTol = 1e-10;

void check_finite_positive(const Vec& v, const char* what) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!(v[j] > 0.0) || !std::isfinite(v[j])) {
      throw std::invalid_argument(std::string(what) + " must be finite and > 0 at index " +
                                  std::to_string(j));
    }
  }
}

}  // namespace

GevParams::GevParams(Vec mu_, Vec gamma_, Vec alpha_, StdfModel ell_)
    : mu(std::move(mu_)), gamma(std::move(gamma_)), alpha(std::move(alpha_)), ell(std::move(ell_)) {
  const std::size_t d = mu.size();
  check_dim(gamma.size(), d, "GevParams");
  check_dim(alpha.size(), d, "GevParams");
  check_dim(ell.dim(), d, "GevParams");
  check_finite_positive(alpha, "GevParams: alpha");
  for (std::size_t j = 0; j < d; ++j) {
    if (!(alpha[j] - gamma[j] * mu[j] > 0.0)) {
      throw std::invalid_argument(
          "GevParams: alpha_j - gamma_j mu_j must be > 0 at index " + std::to_string(j));
    }
  }
}

GpParams::GpParams(Vec sigma, Vec gamma, Vec tau, StdfModel ell)
    : sigma_(std::move(sigma)), gamma_(std::move(gamma)), tau_(std::move(tau)), ell_(std::move(ell)) {
  const std::size_t d = sigma_.size();
  check_dim(gamma_.size(), d, "GpParams");
  check_dim(tau_.size(), d, "GpParams");
  check_dim(ell_.dim(), d, "GpParams");
  check_finite_positive(sigma_, "GpParams: sigma");
  check_finite_positive(tau_, "GpParams: tau");

  const double norm = ell_.eval(tau_);
  pi_.resize(d);
  for (std::size_t j = 0; j < d; ++j) pi_[j] = tau_[j] / norm;
  for (std::size_t j = 0; j < d; ++j) {
    if (!(pi_[j] > 0.0 && pi_[j] <= 1.0)) {
      throw std::invalid_argument("GpParams: pi_j = tau_j / l(tau) outside (0, 1] at index " +
                                  std::to_string(j));
    }
  }
  const double unit = ell_.eval(pi_);
  if (std::abs(unit - 1.0) > kPiConstraintTol) {
    throw std::invalid_argument("GpParams: l(pi) = " + std::to_string(unit) +
                                " violates the unit constraint");
  }
  // Fix the free multiplicative constant: store tau with sum_j tau_j = d.
  const double scale = static_cast<double>(d) / sum_of(tau_);
  for (double& t : tau_) t *= scale;
}

double GpParams::marginal_survival(std::size_t j, double x) const {
  if (j >= dim()) throw std::invalid_argument("GpParams::marginal_survival: index out of range");
  if (!(x >= 0.0)) {
    throw std::invalid_argument("GpParams::marginal_survival: requires x >= 0");
  }
  const double base = sigma_[j] + gamma_[j] * x;
  if (base < 0.0) {
    throw std::domain_error("GpParams::marginal_survival: coordinate " + std::to_string(j) +
                            " outside the support");
  }
  return pi_[j] * pareto_decay(x / sigma_[j], gamma_[j]);
}

GpParams gev_to_gp(const GevParams& g) {
  const std::size_t d = g.dim();
  Vec sigma(d);
  Vec tau(d);
  for (std::size_t j = 0; j < d; ++j) {
    sigma[j] = g.alpha[j] - g.gamma[j] * g.mu[j];
    if (!(sigma[j] > 0.0)) {
      throw std::invalid_argument("gev_to_gp: alpha_j - gamma_j mu_j <= 0 at index " +
                                  std::to_string(j));
    }
    // tau_j = (1 - gamma_j mu_j / alpha_j)^{-1/gamma_j}, e^{mu_j/alpha_j} at gamma_j = 0.
    tau[j] = pareto_decay(-g.mu[j] / g.alpha[j], g.gamma[j]);
  }
  return GpParams(std::move(sigma), g.gamma, std::move(tau), g.ell);
}

GevParams gp_to_gev(const GpParams& h) {
  const std::size_t d = h.dim();
  Vec mu(d);
  Vec alpha(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double g = h.gamma()[j];
    const double s = h.sigma()[j];
    const double t = h.tau()[j];
    if (std::abs(g) < kGammaZeroTol) {
      alpha[j] = s;
      mu[j] = s * std::log(t);
    } else {
      alpha[j] = s * std::pow(t, g);
      mu[j] = (alpha[j] - s) / g;
    }
  }
  return GevParams(std::move(mu), h.gamma(), std::move(alpha), h.ell());
}

GevParams gev_orbit(const GevParams& g, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("gev_orbit: t must be finite and > 0");
  }
  const std::size_t d = g.dim();
  const double log_t = std::log(t);
  Vec mu(d);
  Vec alpha(d);
  for (std::size_t j = 0; j < d; ++j) {
    mu[j] = g.mu[j] + g.alpha[j] * expm1_over_gamma(log_t, g.gamma[j]);
    alpha[j] = std::exp(g.gamma[j] * log_t) * g.alpha[j];
  }
  return GevParams(std::move(mu), g.gamma, std::move(alpha), g.ell);
}

namespace {

// Transformed cdf arguments y_j = pi_j (1 + gamma_j x_j / sigma_j)^{-1/gamma_j}
// with the diverging (lower-endpoint) coordinates flagged.
struct CdfArgs {
  Vec y_at;    // at x
  Vec y_neg;   // at x and 0
  std::vector<bool> diverging;
};

CdfArgs transform_cdf_args(const GpParams& h, std::span<const double> x) {
  const std::size_t d = h.dim();
  check_dim(x.size(), d, "gp_cdf");
  CdfArgs a{Vec(d), Vec(d), std::vector<bool>(d, false)};
  for (std::size_t j = 0; j < d; ++j) {
    const double s = h.sigma()[j];
    const double g = h.gamma()[j];
    if (std::abs(g) >= kGammaZeroTol && s + g * x[j] < 0.0) {
      throw std::domain_error("gp_cdf: coordinate " + std::to_string(j) +
                              " lies outside the support (sigma_j + gamma_j x_j < 0)");
    }
    a.y_at[j] = h.pi()[j] * pareto_decay(x[j] / s, g);
    a.y_neg[j] = x[j] < 0.0 ? a.y_at[j] : h.pi()[j];
    if (a.y_at[j] == kPosInf) a.diverging[j] = true;
  }
  return a;
}

}  // namespace

double gp_cdf(const GpParams& h, std::span<const double> x) {
  const CdfArgs a = transform_cdf_args(h, x);
  const double v = h.ell().diff_at_upper_limit(a.diverging, a.y_neg, a.y_at);
  return std::clamp(v, 0.0, 1.0);
}

double std_cdf(std::span<const double> pi, const StdfModel& ell, std::span<const double> z) {
  const std::size_t d = ell.dim();
  check_dim(pi.size(), d, "std_cdf");
  check_dim(z.size(), d, "std_cdf");
  const double unit = ell.eval(pi);
  if (std::abs(unit - 1.0) > 1e-6) {
    throw std::invalid_argument("std_cdf: l(pi) must equal 1, got " + std::to_string(unit));
  }
  Vec y_at(d);
  Vec y_neg(d);
  std::vector<bool> diverging(d, false);
  for (std::size_t j = 0; j < d; ++j) {
    y_at[j] = pi[j] * std::exp(-z[j]);
    y_neg[j] = z[j] < 0.0 ? y_at[j] : pi[j];
    if (y_at[j] == kPosInf) diverging[j] = true;
  }
  const double v = ell.diff_at_upper_limit(diverging, y_neg, y_at);
  return std::clamp(v, 0.0, 1.0);
}

double joint_survival(const GpParams& h, std::span<const double> x) {
  const std::size_t d = h.dim();
  check_dim(x.size(), d, "joint_survival");
  Vec s(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (!(x[j] >= 0.0)) {
      throw std::invalid_argument("joint_survival: requires x >= 0, violated at index " +
                                  std::to_string(j));
    }
    s[j] = h.marginal_survival(j, x[j]);
  }
  return h.ell().eval(s);
}

Vec standardize(const GpParams& h, std::span<const double> x) {
  const std::size_t d = h.dim();
  check_dim(x.size(), d, "standardize");
  Vec z(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double g = h.gamma()[j];
    const double u = x[j] / h.sigma()[j];
    if (std::abs(g) >= kGammaZeroTol && 1.0 + g * u < 0.0) {
      throw std::domain_error("standardize: coordinate " + std::to_string(j) +
                              " lies outside the support");
    }
    z[j] = log1p_over_gamma(u, g);
  }
  return z;
}

Vec unstandardize(const GpParams& h, std::span<const double> z) {
  const std::size_t d = h.dim();
  check_dim(z.size(), d, "unstandardize");
  Vec x(d);
  for (std::size_t j = 0; j < d; ++j) {
    x[j] = h.sigma()[j] * expm1_over_gamma(z[j], h.gamma()[j]);
  }
  return x;
}

}  // namespace mgpd
