#include "mgpd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mgpd/quadrature.hpp"

namespace mgpd {

namespace {

double binom_se(double p, std::size_t n) {
  const double q = std::clamp(p, 0.0, 1.0);
  return std::sqrt(q * (1.0 - q) / static_cast<double>(n));
}

}  // namespace

ComparisonReport make_report(std::string statistic, double analytic, double empirical,
                             double se, double multiplier, std::size_t n, std::uint64_t seed) {
  ComparisonReport r;
  r.statistic = std::move(statistic);
  r.analytic = analytic;
  r.empirical = empirical;
  r.se = se;
  r.tolerance = multiplier * se;
  r.pass = std::abs(analytic - empirical) <= r.tolerance;
  r.n = n;
  r.seed = seed;
  return r;
}

std::vector<ComparisonReport> check_cdf(const SampleBatch& batch, const GpParams& h,
                                        std::span<const Vec> grid, double multiplier) {
  if (batch.n() == 0) throw std::invalid_argument("check_cdf: empty batch");
  check_dim(batch.dim(), h.dim(), "check_cdf");
  std::vector<ComparisonReport> out;
  out.reserve(grid.size());
  const std::size_t n = batch.n();
  const std::size_t d = h.dim();
  for (const Vec& x : grid) {
    check_dim(x.size(), d, "check_cdf: grid point");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto row = batch.data.row(i);
      bool below = true;
      for (std::size_t j = 0; j < d; ++j) {
        if (!(row[j] <= x[j])) {
          below = false;
          break;
        }
      }
      if (below) ++hits;
    }
    const double analytic = gp_cdf(h, x);
    const double empirical = static_cast<double>(hits) / static_cast<double>(n);
    std::ostringstream name;
    name << "cdf(";
    for (std::size_t j = 0; j < d; ++j) name << (j ? "," : "") << x[j];
    name << ")";
    out.push_back(make_report(name.str(), analytic, empirical, binom_se(analytic, n),
                              multiplier, n, batch.seed));
  }
  return out;
}

std::vector<ComparisonReport> check_stdf(const SampleBatch& batch, const GpParams& h,
                                         std::span<const Vec> grid, double multiplier) {
  if (batch.n() == 0) throw std::invalid_argument("check_stdf: empty batch");
  check_dim(batch.dim(), h.dim(), "check_stdf");
  std::vector<ComparisonReport> out;
  out.reserve(grid.size());
  const std::size_t n = batch.n();
  const std::size_t d = h.dim();
  Vec marg(d);
  for (const Vec& x : grid) {
    check_dim(x.size(), d, "check_stdf: grid point");
    std::fill(marg.begin(), marg.end(), 0.0);
    std::size_t joint = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto row = batch.data.row(i);
      bool any = false;
      for (std::size_t j = 0; j < d; ++j) {
        if (row[j] > x[j]) {
          marg[j] += 1.0;
          any = true;
        }
      }
      if (any) ++joint;
    }
    for (double& v : marg) v /= static_cast<double>(n);
    const double analytic = h.ell().eval(marg);
    const double empirical = static_cast<double>(joint) / static_cast<double>(n);
    // The analytic side is evaluated at estimated marginal survivals, so
    // their binomial noise enters too; the partial derivatives of l are at
    // most one, which bounds the propagated term by the plain sum.
    double se = binom_se(analytic, n);
    for (std::size_t j = 0; j < d; ++j) se += binom_se(marg[j], n);
    std::ostringstream name;
    name << "stdf-identity(";
    for (std::size_t j = 0; j < d; ++j) name << (j ? "," : "") << x[j];
    name << ")";
    out.push_back(make_report(name.str(), analytic, empirical, se, multiplier, n, batch.seed));
  }
  return out;
}

std::vector<ComparisonReport> check_extremal_scaling(const SampleBatch& batch, const GpParams& h,
                                                     std::span<const double> p_grid,
                                                     double multiplier) {
  if (batch.n() == 0) throw std::invalid_argument("check_extremal_scaling: empty batch");
  check_dim(batch.dim(), h.dim(), "check_extremal_scaling");
  const std::size_t n = batch.n();
  const std::size_t d = h.dim();
  const auto [extremal, tail_dep] = h.ell().summary_coefficients();
  std::vector<ComparisonReport> out;
  for (double p : p_grid) {
    if (!(p > 0.0) || p > *std::min_element(h.pi().begin(), h.pi().end())) {
      throw std::invalid_argument("check_extremal_scaling: p must lie in (0, min pi]");
    }
    std::size_t any_hits = 0;
    std::size_t all_hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto row = batch.data.row(i);
      bool any = false;
      bool all = true;
      for (std::size_t j = 0; j < d; ++j) {
        // survival_j(X_j) < p iff X_j exceeds the marginal p-quantile of the
        // excess tail; X_j <= 0 never qualifies since survival >= pi_j > p.
        const bool hit = row[j] > 0.0 && h.marginal_survival(j, row[j]) < p;
        any = any || hit;
        all = all && hit;
      }
      if (any) ++any_hits;
      if (all) ++all_hits;
    }
    const double any_emp = static_cast<double>(any_hits) / static_cast<double>(n);
    const double all_emp = static_cast<double>(all_hits) / static_cast<double>(n);
    out.push_back(make_report("any-exceedance p=" + std::to_string(p), p * extremal, any_emp,
                              binom_se(p * extremal, n), multiplier, n, batch.seed));
    out.push_back(make_report("all-exceedance p=" + std::to_string(p), p * tail_dep, all_emp,
                              binom_se(p * tail_dep, n), multiplier, n, batch.seed));
  }
  return out;
}

namespace {

double tensor_mass(const DensityModel& dm, std::span<const double> lower,
                   std::span<const double> upper, Vec& point, std::size_t axis,
                   const QuadratureConfig& cfg) {
  const std::size_t d = lower.size();
  if (axis == d) return dm(point);
  return integrate_interval(
      [&](double v) {
        point[axis] = v;
        return tensor_mass(dm, lower, upper, point, axis + 1, cfg);
      },
      lower[axis], upper[axis], cfg);
}

}  // namespace

ComparisonReport check_density(const DensityModel& dm, std::span<const double> lower,
                               std::span<const double> upper, double tail_allowance,
                               double tol) {
  const std::size_t d = dm.dim;
  if (d > 3) throw std::invalid_argument("check_density: tensor quadrature limited to d <= 3");
  check_dim(lower.size(), d, "check_density");
  check_dim(upper.size(), d, "check_density");

  // Split the box into the d disjoint slabs that tile box ∩ {z not<= 0}:
  // slab k has z_k > 0 and z_j <= 0 for j < k; this keeps the indicator
  // kink out of the integrand. Face densities may still jump inside a slab,
  // so the tensor rule runs deeper and looser than the pointwise default.
  QuadratureConfig cfg = dm.quadrature;
  cfg.rel_tol = std::max(cfg.rel_tol, 1e-5);
  cfg.max_subdivisions = std::max(cfg.max_subdivisions, 30u);
  double mass = 0.0;
  Vec lo(d);
  Vec hi(d);
  Vec point(d);
  for (std::size_t k = 0; k < d; ++k) {
    bool feasible = upper[k] > 0.0;
    for (std::size_t j = 0; j < d && feasible; ++j) {
      if (j < k) {
        lo[j] = lower[j];
        hi[j] = std::min(0.0, upper[j]);
        feasible = lo[j] < hi[j];
      } else if (j == k) {
        lo[j] = std::max(0.0, lower[j]);
        hi[j] = upper[j];
      } else {
        lo[j] = lower[j];
        hi[j] = upper[j];
      }
    }
    if (!feasible) continue;
    mass += tensor_mass(dm, lo, hi, point, 0, cfg);
  }

  ComparisonReport r;
  r.statistic = "density-mass";
  r.analytic = 1.0;
  r.empirical = mass;
  r.se = tail_allowance;
  r.tolerance = tol + tail_allowance;
  r.pass = std::abs(mass - 1.0) <= r.tolerance;
  r.n = 0;
  return r;
}

ComparisonReport check_ks(std::string statistic, Vec sample,
                          const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("check_ks: empty sample");
  std::sort(sample.begin(), sample.end());
  const std::size_t n = sample.size();
  double dist = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sample[i]);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    dist = std::max(dist, std::max(std::abs(hi - f), std::abs(f - lo)));
  }
  // Asymptotic 1% critical value of the Kolmogorov statistic.
  const double critical = 1.6276 / std::sqrt(static_cast<double>(n));
  ComparisonReport r;
  r.statistic = std::move(statistic);
  r.analytic = 0.0;
  r.empirical = dist;
  r.se = critical;
  r.tolerance = critical;
  r.pass = dist < critical;
  r.n = n;
  return r;
}

std::string report_json_line(const ComparisonReport& r) {
  nlohmann::json j{{"statistic", r.statistic}, {"analytic", r.analytic},
                   {"empirical", r.empirical}, {"se", r.se},
                   {"tolerance", r.tolerance}, {"pass", r.pass},
                   {"n", r.n},                 {"seed", r.seed}};
  return j.dump();
}

std::string report_table(std::span<const ComparisonReport> reports) {
  std::ostringstream os;
  os << std::left << std::setw(34) << "statistic" << std::right << std::setw(13) << "analytic"
     << std::setw(13) << "empirical" << std::setw(12) << "tol" << std::setw(7) << "pass"
     << '\n';
  for (const auto& r : reports) {
    os << std::left << std::setw(34) << r.statistic << std::right << std::fixed
       << std::setprecision(6) << std::setw(13) << r.analytic << std::setw(13) << r.empirical
       << std::setw(12) << r.tolerance << std::setw(7) << (r.pass ? "ok" : "FAIL") << '\n';
    os.unsetf(std::ios::fixed);
  }
  return os.str();
}

}  // namespace mgpd
