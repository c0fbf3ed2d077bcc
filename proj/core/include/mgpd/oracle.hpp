#ifndef MGPD_ORACLE_HPP
#define MGPD_ORACLE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mgpd/common.hpp"
#include "mgpd/density.hpp"
#include "mgpd/params.hpp"
#include "mgpd/spectral.hpp"

namespace mgpd {

/// One empirical-vs-analytic comparison. The pass flag is
/// |analytic - empirical| <= tolerance with tolerance = multiplier * se
/// (binomial standard error) or the critical value for KS-style checks.
struct ComparisonReport {
  std::string statistic;
  double analytic = 0.0;
  double empirical = 0.0;
  double se = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

ComparisonReport make_report(std::string statistic, double analytic, double empirical,
                             double se, double multiplier, std::size_t n, std::uint64_t seed);

/// Empirical cdf of the batch against gp_cdf at each grid point, with the
/// binomial standard error sqrt(p (1-p) / n) at the analytic p.
std::vector<ComparisonReport> check_cdf(const SampleBatch& batch, const GpParams& h,
                                        std::span<const Vec> grid, double multiplier = 3.0);

/// Joint-exceedance identity: the empirical P(X not<= x) against l applied
/// to the empirical marginal survivals, at each grid point (x >= 0).
std::vector<ComparisonReport> check_stdf(const SampleBatch& batch, const GpParams& h,
                                         std::span<const Vec> grid, double multiplier = 3.0);

/// Scaling diagnostic: for p small enough, P(exists j: survival_j(X_j) < p)
/// equals p * l(1,...,1) and P(forall j) equals p * R(1,...,1).
std::vector<ComparisonReport> check_extremal_scaling(const SampleBatch& batch, const GpParams& h,
                                                     std::span<const double> p_grid,
                                                     double multiplier = 3.0);

/// Tensor-quadrature mass of a density over box ∩ {z not<= 0} plus an
/// analytic tail allowance for the mass outside the box; passes when the
/// total lies within tol of one. Dimensions d <= 3.
ComparisonReport check_density(const DensityModel& dm, std::span<const double> lower,
                               std::span<const double> upper, double tail_allowance,
                               double tol = 1e-3);

/// Kolmogorov-Smirnov distance of a univariate sample against a cdf, tested
/// at the asymptotic 1% critical value 1.6276 / sqrt(n).
ComparisonReport check_ks(std::string statistic, Vec sample,
                          const std::function<double(double)>& cdf);

std::string report_json_line(const ComparisonReport& r);
std::string report_table(std::span<const ComparisonReport> reports);

}  // namespace mgpd

#endif  // MGPD_ORACLE_HPP
