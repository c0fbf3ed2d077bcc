#ifndef MGPD_PARAMS_HPP
#define MGPD_PARAMS_HPP

#include <span>
#include <vector>

#include "mgpd/common.hpp"
#include "mgpd/stdf.hpp"

namespace mgpd {

/// Max-stable law with three-parameter margins and a stable tail dependence
/// function: location mu, shape gamma, scale alpha > 0, with the additional
/// requirement alpha_j - gamma_j mu_j > 0 so the origin sits strictly inside
/// the marginal supports.
struct GevParams {
  Vec mu;
  Vec gamma;
  Vec alpha;
  StdfModel ell;

  GevParams(Vec mu_, Vec gamma_, Vec alpha_, StdfModel ell_);
  std::size_t dim() const { return mu.size(); }
};

/// Threshold-excess law in the (sigma, gamma, pi, ell) parametrization.
/// Invariants enforced on construction: sigma > 0, l(pi) = 1 (pi is derived
/// as tau / l(tau)), and tau is stored rescaled to sum_j tau_j = d.
class GpParams {
 public:
  /// tau is any positive multiple of the intended exceedance-rate vector;
  /// pi itself is a valid choice.
  GpParams(Vec sigma, Vec gamma, Vec tau, StdfModel ell);

  std::size_t dim() const { return sigma_.size(); }
  const Vec& sigma() const { return sigma_; }
  const Vec& gamma() const { return gamma_; }
  const Vec& pi() const { return pi_; }
  const Vec& tau() const { return tau_; }
  const StdfModel& ell() const { return ell_; }

  /// P(X_j > x) for x >= 0: pi_j (1 + gamma_j x / sigma_j)^{-1/gamma_j}.
  double marginal_survival(std::size_t j, double x) const;

 private:
  Vec sigma_;
  Vec gamma_;
  Vec pi_;
  Vec tau_;
  StdfModel ell_;
};

struct MarginalEndpoints {
  Vec eta;  // -sigma_j / gamma_j for gamma_j > 0, -inf otherwise
};

/// The excess law generated by a max-stable family; mu and alpha drop out,
/// leaving (sigma, gamma, pi, ell) with sigma = alpha - gamma mu.
GpParams gev_to_gp(const GevParams& g);

/// A canonical max-stable representative of a GP law (the t = 1 member of
/// the orbit): alpha = sigma tau^gamma, mu = (alpha - sigma) / gamma.
GevParams gp_to_gev(const GpParams& h);

/// The t-th power orbit: G^t has mu(t) = mu + alpha (t^gamma - 1)/gamma and
/// alpha(t) = t^gamma alpha; every member generates the same excess law.
GevParams gev_orbit(const GevParams& g, double t);

/// Joint cdf H(x). Coordinates exactly at a lower endpoint are evaluated by
/// right-continuity; arguments strictly outside the support raise
/// std::domain_error naming the coordinate.
double gp_cdf(const GpParams& h, std::span<const double> x);

/// Standardized cdf P(Z <= z) = l(pi e^{-(z and 0)}) - l(pi e^{-z}) for a
/// unit-scale, zero-shape law; requires l(pi) = 1.
double std_cdf(std::span<const double> pi, const StdfModel& ell, std::span<const double> z);

/// P(X not<= x) = l(survival_1(x_1), ..., survival_d(x_d)) for x >= 0.
double joint_survival(const GpParams& h, std::span<const double> x);

/// Marginal transforms between the general and standardized scales:
/// z = log(1 + gamma x / sigma) / gamma and x = sigma (e^{gamma z} - 1) / gamma.
Vec standardize(const GpParams& h, std::span<const double> x);
Vec unstandardize(const GpParams& h, std::span<const double> z);

}  // namespace mgpd

#endif  // MGPD_PARAMS_HPP
