#include "mgpd/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mgpd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> x0, const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");

  std::vector<Vec> simplex(n + 1, Vec(x0.begin(), x0.end()));
  for (std::size_t k = 0; k < n; ++k) {
    simplex[k + 1][k] += 0.05 * std::abs(x0[k]) + 0.02;
  }
  Vec values(n + 1);
  for (std::size_t k = 0; k <= n; ++k) values[k] = f(simplex[k]);

  std::vector<std::size_t> order(n + 1);
  Vec centroid(n), reflected(n), trial(n);
  NelderMeadResult result;

  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order[0];
    const std::size_t worst = order[n];
    const std::size_t second_worst = order[n - 1];

    result.iterations = iter;
    if (std::isfinite(values[best]) && std::isfinite(values[worst]) &&
        values[worst] - values[best] < opts.f_tol) {
      result.converged = true;
      result.x = simplex[best];
      result.value = values[best];
      return result;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[k][j];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    for (std::size_t j = 0; j < n; ++j) reflected[j] = 2.0 * centroid[j] - simplex[worst][j];
    const double fr = f(reflected);

    if (fr < values[order[0]]) {
      // Expand.
      for (std::size_t j = 0; j < n; ++j) trial[j] = centroid[j] + 2.0 * (reflected[j] - centroid[j]);
      const double fe = f(trial);
      if (fe < fr) {
        simplex[worst] = trial;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    // Contract.
    const bool outside = fr < values[worst];
    const Vec& base = outside ? reflected : simplex[worst];
    for (std::size_t j = 0; j < n; ++j) trial[j] = centroid[j] + 0.5 * (base[j] - centroid[j]);
    const double fc = f(trial);
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = trial;
      values[worst] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == order[0]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        simplex[k][j] = simplex[order[0]][j] + 0.5 * (simplex[k][j] - simplex[order[0]][j]);
      }
      values[k] = f(simplex[k]);
    }
  }

  const std::size_t best =
      std::distance(values.begin(), std::min_element(values.begin(), values.end()));
  result.x = simplex[best];
  result.value = values[best];
  result.iterations = opts.max_iterations;
  result.converged = false;
  return result;
}

FitFamily univariate_gp_family() {
  FitFamily fam;
  fam.name = "univariate_gp";
  fam.param_names = {"sigma", "gamma"};
  fam.data_dim = 1;
  fam.log_density = [](std::span<const double> p, std::span<const double> x) {
    const double sigma = p[0];
    const double gamma = p[1];
    if (!(sigma > 0.0)) return kNegInf;
    const double v = x[0];
    if (!(v > 0.0)) return kNegInf;
    if (std::abs(gamma) < kGammaZeroTol) return -std::log(sigma) - v / sigma;
    const double base = 1.0 + gamma * v / sigma;
    if (!(base > 0.0)) return kNegInf;
    return -std::log(sigma) - (1.0 / gamma + 1.0) * std::log(base);
  };
  fam.to_unconstrained = [](std::span<const double> p) {
    return Vec{std::log(p[0]), p[1]};
  };
  fam.to_natural = [](std::span<const double> u) {
    return Vec{std::exp(u[0]), u[1]};
  };
  return fam;
}

FitFamily logistic_gp_family() {
  FitFamily fam;
  fam.name = "logistic_gp";
  fam.param_names = {"sigma", "gamma", "theta"};
  fam.data_dim = 2;
  // Exchangeable bivariate law with tau = (1, 1), hence pi_j = 2^{-theta}.
  // The density is the mixed second derivative of -l(a, b) at
  // a = pi (1 + gamma x_1/sigma)^{-1/gamma}, b likewise:
  //   h(x) = (alpha - 1) (a b)^{alpha - 1} (a^alpha + b^alpha)^{theta - 2}
  //          |a'(x_1)| |b'(x_2)|,           alpha = 1/theta.
  fam.log_density = [](std::span<const double> p, std::span<const double> x) {
    const double sigma = p[0];
    const double gamma = p[1];
    const double theta = p[2];
    if (!(sigma > 0.0) || !(theta > 0.0) || !(theta < 1.0)) return kNegInf;
    if (x[0] <= 0.0 && x[1] <= 0.0) return kNegInf;
    const double alpha = 1.0 / theta;
    const double log_pi = -theta * std::log(2.0);
    double log_y[2];
    for (int j = 0; j < 2; ++j) {
      if (std::abs(gamma) < kGammaZeroTol) {
        log_y[j] = -x[j] / sigma;
      } else {
        const double base = 1.0 + gamma * x[j] / sigma;
        if (!(base > 0.0)) return kNegInf;
        log_y[j] = -std::log(base) / gamma;
      }
    }
    const double log_a = log_pi + log_y[0];
    const double log_b = log_pi + log_y[1];
    // log(a^alpha + b^alpha) via the larger term.
    const double la = alpha * log_a;
    const double lb = alpha * log_b;
    const double lm = std::max(la, lb);
    const double log_s = lm + std::log1p(std::exp(std::min(la, lb) - lm));
    // |dy/dx| contributes y^{1+gamma}/sigma per coordinate.
    const double log_jac =
        (1.0 + gamma) * (log_y[0] + log_y[1]) - 2.0 * std::log(sigma) + 2.0 * log_pi;
    return std::log(alpha - 1.0) + (alpha - 1.0) * (log_a + log_b) +
           (theta - 2.0) * log_s + log_jac;
  };
  fam.to_unconstrained = [](std::span<const double> p) {
    return Vec{std::log(p[0]), p[1], std::log(p[2] / (1.0 - p[2]))};
  };
  fam.to_natural = [](std::span<const double> u) {
    return Vec{std::exp(u[0]), u[1], 1.0 / (1.0 + std::exp(-u[2]))};
  };
  return fam;
}

namespace {

// Standard errors from the inverse observed information, computed by central
// finite differences of the negative log-likelihood on the natural scale.
Vec observed_information_se(const std::function<double(std::span<const double>)>& negloglik,
                            const Vec& theta) {
  const std::size_t k = theta.size();
  Matrix hess(k, k);
  Vec step(k);
  for (std::size_t i = 0; i < k; ++i) step[i] = std::max(1e-4 * std::abs(theta[i]), 1e-6);

  const double f0 = negloglik(theta);
  Vec p = theta;
  auto eval2 = [&](std::size_t i, double si, std::size_t j, double sj) {
    p = theta;
    p[i] += si;
    if (i == j) {
      p[i] += sj;
    } else {
      p[j] += sj;
    }
    return negloglik(p);
  };
  bool ok = std::isfinite(f0);
  for (std::size_t i = 0; i < k && ok; ++i) {
    for (std::size_t j = i; j < k && ok; ++j) {
      double v;
      if (i == j) {
        v = (eval2(i, step[i], i, 0.0) - 2.0 * f0 + eval2(i, -step[i], i, 0.0)) /
            (step[i] * step[i]);
      } else {
        v = (eval2(i, step[i], j, step[j]) - eval2(i, step[i], j, -step[j]) -
             eval2(i, -step[i], j, step[j]) + eval2(i, -step[i], j, -step[j])) /
            (4.0 * step[i] * step[j]);
      }
      ok = std::isfinite(v);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  Vec se(k, kNaN);
  if (!ok) return se;

  // Invert by Gauss-Jordan with partial pivoting.
  Matrix inv(k, k);
  for (std::size_t i = 0; i < k; ++i) inv(i, i) = 1.0;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::abs(hess(r, col)) > std::abs(hess(piv, col))) piv = r;
    }
    if (std::abs(hess(piv, col)) < 1e-12) return se;
    if (piv != col) {
      for (std::size_t c = 0; c < k; ++c) {
        std::swap(hess(piv, c), hess(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    }
    const double diag = hess(col, col);
    for (std::size_t c = 0; c < k; ++c) {
      hess(col, c) /= diag;
      inv(col, c) /= diag;
    }
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double m = hess(r, col);
      if (m == 0.0) continue;
      for (std::size_t c = 0; c < k; ++c) {
        hess(r, c) -= m * hess(col, c);
        inv(r, c) -= m * inv(col, c);
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    se[i] = inv(i, i) > 0.0 ? std::sqrt(inv(i, i)) : kNaN;
  }
  return se;
}

}  // namespace

FitReport fit_mle(const SampleBatch& data, const FitFamily& family,
                  std::span<const double> init, const FitOptions& opts) {
  if (data.n() == 0) throw std::invalid_argument("fit_mle: empty batch");
  check_dim(data.dim(), family.data_dim, "fit_mle: data");
  check_dim(init.size(), family.param_names.size(), "fit_mle: init");

  auto loglik_natural = [&](std::span<const double> p) {
    double ll = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
      const double l = family.log_density(p, data.data.row(i));
      if (!std::isfinite(l)) return kNegInf;
      ll += l;
    }
    return ll;
  };
  auto objective = [&](std::span<const double> u) {
    const Vec p = family.to_natural(u);
    const double ll = loglik_natural(p);
    return std::isfinite(ll) ? -ll : kPosInf;
  };

  const double ll0 = loglik_natural(init);
  if (!std::isfinite(ll0)) {
    throw std::invalid_argument("fit_mle: log-likelihood at init is not finite");
  }

  Vec u = family.to_unconstrained(init);
  NelderMeadOptions nm_opts;
  nm_opts.f_tol = opts.loglik_tol;
  nm_opts.max_iterations = opts.max_iterations;

  FitReport report;
  double best = kPosInf;
  for (std::size_t r = 0; r <= opts.restarts; ++r) {
    const NelderMeadResult res = nelder_mead(objective, u, nm_opts);
    report.iterations += res.iterations;
    report.restarts_used = r;
    report.converged = res.converged;
    const bool improved = res.value < best - opts.loglik_tol;
    if (res.value < best) {
      best = res.value;
      u = res.x;
    }
    if (res.converged && !improved && r > 0) break;
  }

  report.params = family.to_natural(u);
  report.param_names = family.param_names;
  report.loglik = -best;
  report.std_errors = observed_information_se(
      [&](std::span<const double> p) {
        const double ll = loglik_natural(p);
        return std::isfinite(ll) ? -ll : kPosInf;
      },
      report.params);
  return report;
}

}  // namespace mgpd
