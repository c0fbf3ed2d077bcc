#include "mgpd/stdf.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mgpd {

namespace {

void check_theta(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("StdfModel: logistic theta must lie in (0, 1], got " +
                                std::to_string(theta));
  }
}

// max_j y_j v_j over the positive entries of v; the 0 * inf convention makes
// zero entries drop out.
double row_max(std::span<const double> y, std::span<const double> v,
               std::span<const std::size_t> cols) {
  double m = 0.0;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const double vj = v[cols[k]];
    if (vj > 0.0) m = std::max(m, y[k] * vj);
  }
  return m;
}

double row_min(std::span<const double> y, std::span<const double> v,
               std::span<const std::size_t> cols) {
  double m = kPosInf;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const double vj = v[cols[k]];
    m = std::min(m, prod_zero_rule(vj, y[k]));
  }
  return m;
}

}  // namespace

StdfModel StdfModel::independence(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("StdfModel: dim must be >= 1");
  return StdfModel(StdfVariant::Independence, dim);
}

StdfModel StdfModel::complete_dependence(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("StdfModel: dim must be >= 1");
  return StdfModel(StdfVariant::CompleteDependence, dim);
}

StdfModel StdfModel::logistic(std::size_t dim, double theta) {
  if (dim == 0) throw std::invalid_argument("StdfModel: dim must be >= 1");
  check_theta(theta);
  StdfModel m(StdfVariant::Logistic, dim);
  m.theta_ = theta;
  return m;
}

StdfModel StdfModel::dnorm_monte_carlo(std::size_t dim, const Generator& generator,
                                       std::size_t n_mc, std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("StdfModel: dim must be >= 1");
  if (n_mc == 0) throw std::invalid_argument("StdfModel: n_mc must be >= 1");
  RngStream rng(seed);
  Matrix sample(n_mc, dim);
  for (std::size_t i = 0; i < n_mc; ++i) generator(rng, sample.row(i));
  return dnorm_from_sample(std::move(sample));
}

StdfModel StdfModel::dnorm_from_sample(Matrix sample) {
  const std::size_t dim = sample.cols();
  const std::size_t n_mc = sample.rows();
  if (dim == 0) throw std::invalid_argument("StdfModel: dim must be >= 1");
  if (n_mc == 0) throw std::invalid_argument("StdfModel: n_mc must be >= 1");

  // Renormalize columns to unit sample means so E[V_j] = 1 holds exactly on
  // the frozen sample; the unit-vector property l(y e_j) = y then holds
  // without Monte Carlo error.
  for (std::size_t j = 0; j < dim; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n_mc; ++i) {
      const double v = sample(i, j);
      if (!(v >= 0.0)) {
        throw std::invalid_argument("StdfModel: generator produced a negative component");
      }
      mean += v;
    }
    mean /= static_cast<double>(n_mc);
    if (!(mean > 0.0)) {
      throw std::invalid_argument("StdfModel: generator component " + std::to_string(j) +
                                  " has zero sample mean");
    }
    for (std::size_t i = 0; i < n_mc; ++i) sample(i, j) /= mean;
  }

  StdfModel m(StdfVariant::DNormMonteCarlo, dim);
  m.sample_ = std::make_shared<Matrix>(std::move(sample));
  m.columns_.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) m.columns_[j] = j;
  return m;
}

StdfModel::Generator canonical_generator(const StdfModel& base) {
  const std::size_t d = base.dim();
  switch (base.variant()) {
    case StdfVariant::Independence:
      return [d](RngStream& rng, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        out[rng.uniform_index(d)] = static_cast<double>(d);
      };
    case StdfVariant::CompleteDependence:
      return [](RngStream&, std::span<double> out) {
        std::fill(out.begin(), out.end(), 1.0);
      };
    case StdfVariant::Logistic: {
      const double theta = base.theta();
      if (theta == 1.0) return canonical_generator(StdfModel::independence(d));
      // V_j = Frechet(1/theta) / Gamma(1 - theta); E[V_j] = 1.
      const double inv_mean = 1.0 / std::tgamma(1.0 - theta);
      return [theta, inv_mean](RngStream& rng, std::span<double> out) {
        for (double& v : out) v = std::pow(rng.exponential(), -theta) * inv_mean;
      };
    }
    case StdfVariant::DNormMonteCarlo:
      break;
  }
  throw std::invalid_argument("canonical_generator: base must be a closed-form variant");
}

StdfModel StdfModel::dnorm_of(const StdfModel& base, std::size_t n_mc, std::uint64_t seed) {
  StdfModel m = dnorm_monte_carlo(base.dim(), canonical_generator(base), n_mc, seed);
  m.provenance_ = McProvenance{base.variant(), base.theta(), n_mc, seed};
  return m;
}

double StdfModel::eval_closed(std::span<const double> y) const {
  switch (variant_) {
    case StdfVariant::Independence:
      return sum_of(y);
    case StdfVariant::CompleteDependence:
      return max_of(y);
    case StdfVariant::Logistic: {
      const double m = max_of(y);
      if (m == 0.0) return 0.0;
      if (m == kPosInf) return kPosInf;
      double s = 0.0;
      for (double v : y) s += std::pow(v / m, 1.0 / theta_);
      return m * std::pow(s, theta_);
    }
    case StdfVariant::DNormMonteCarlo:
      break;
  }
  throw std::logic_error("eval_closed on Monte Carlo model");
}

double StdfModel::eval(std::span<const double> y) const {
  check_dim(y.size(), dim_, "StdfModel::eval");
  check_nonneg(y, "StdfModel::eval");
  if (variant_ != StdfVariant::DNormMonteCarlo) return eval_closed(y);
  const Matrix& s = *sample_;
  double acc = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i) acc += row_max(y, s.row(i), columns_);
  return acc / static_cast<double>(s.rows());
}

McEstimate StdfModel::eval_mc(std::span<const double> y) const {
  check_dim(y.size(), dim_, "StdfModel::eval_mc");
  check_nonneg(y, "StdfModel::eval_mc");
  if (variant_ != StdfVariant::DNormMonteCarlo) return {eval_closed(y), 0.0, 0};
  const Matrix& s = *sample_;
  const std::size_t n = s.rows();
  double acc = 0.0;
  double acc2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = row_max(y, s.row(i), columns_);
    acc += m;
    acc2 += m * m;
  }
  const double mean = acc / static_cast<double>(n);
  const double var = std::max(0.0, acc2 / static_cast<double>(n) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

double StdfModel::inclusion_exclusion(std::span<const double> y) const {
  if (dim_ > 20) {
    throw std::domain_error(
        "StdfModel::tail_copula: the alternating sum is capped at dim <= 20");
  }
  Vec masked(dim_);
  double total = 0.0;
  const std::size_t full = (std::size_t{1} << dim_) - 1;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < dim_; ++j) {
      masked[j] = (mask >> j) & 1u ? y[j] : 0.0;
    }
    const int bits = std::popcount(mask);
    const double term = eval_closed(masked);
    total += (bits % 2 == 1) ? term : -term;
  }
  return total;
}

double StdfModel::tail_copula(std::span<const double> y) const {
  check_dim(y.size(), dim_, "StdfModel::tail_copula");
  check_nonneg(y, "StdfModel::tail_copula");
  switch (variant_) {
    case StdfVariant::Independence:
      return dim_ == 1 ? y[0] : 0.0;
    case StdfVariant::CompleteDependence:
      return min_of(y);
    case StdfVariant::Logistic:
      return inclusion_exclusion(y);
    case StdfVariant::DNormMonteCarlo: {
      const Matrix& s = *sample_;
      double acc = 0.0;
      for (std::size_t i = 0; i < s.rows(); ++i) acc += row_min(y, s.row(i), columns_);
      return acc / static_cast<double>(s.rows());
    }
  }
  throw std::logic_error("tail_copula: unreachable");
}

StdfModel StdfModel::marginal(std::span<const std::size_t> index_set) const {
  if (index_set.empty()) throw std::invalid_argument("StdfModel::marginal: empty index set");
  for (std::size_t j : index_set) {
    if (j >= dim_) {
      throw std::invalid_argument("StdfModel::marginal: index " + std::to_string(j) +
                                  " out of range for dim " + std::to_string(dim_));
    }
  }
  const std::size_t k = index_set.size();
  switch (variant_) {
    case StdfVariant::Independence:
      return independence(k);
    case StdfVariant::CompleteDependence:
      return complete_dependence(k);
    case StdfVariant::Logistic:
      return logistic(k, theta_);
    case StdfVariant::DNormMonteCarlo: {
      StdfModel m(StdfVariant::DNormMonteCarlo, k);
      m.sample_ = sample_;
      m.columns_.reserve(k);
      for (std::size_t j : index_set) m.columns_.push_back(columns_[j]);
      return m;
    }
  }
  throw std::logic_error("marginal: unreachable");
}

std::pair<double, double> StdfModel::summary_coefficients() const {
  const Vec ones(dim_, 1.0);
  return {eval(ones), tail_copula(ones)};
}

bool StdfModel::has_gradient() const { return variant_ != StdfVariant::DNormMonteCarlo; }

Vec StdfModel::gradient(std::span<const double> y) const {
  check_dim(y.size(), dim_, "StdfModel::gradient");
  check_nonneg(y, "StdfModel::gradient");
  Vec g(dim_, 0.0);
  switch (variant_) {
    case StdfVariant::Independence:
      std::fill(g.begin(), g.end(), 1.0);
      return g;
    case StdfVariant::CompleteDependence: {
      // One-sided choice at ties: the first argmax carries the derivative.
      std::size_t arg = 0;
      for (std::size_t j = 1; j < dim_; ++j) {
        if (y[j] > y[arg]) arg = j;
      }
      g[arg] = 1.0;
      return g;
    }
    case StdfVariant::Logistic: {
      const double m = max_of(y);
      if (m == 0.0) {
        // Directional limit along each axis: the unit-vector property gives
        // slope one coordinatewise.
        std::fill(g.begin(), g.end(), 1.0);
        return g;
      }
      const double alpha = 1.0 / theta_;
      double s = 0.0;
      for (double v : y) s += std::pow(v / m, alpha);
      const double s_pow = std::pow(s, theta_ - 1.0);
      for (std::size_t j = 0; j < dim_; ++j) {
        g[j] = std::pow(y[j] / m, alpha - 1.0) * s_pow;
      }
      return g;
    }
    case StdfVariant::DNormMonteCarlo:
      break;
  }
  throw std::domain_error("StdfModel::gradient: not available for Monte Carlo models");
}

double StdfModel::diff_at_upper_limit(const std::vector<bool>& diverging,
                                      std::span<const double> y_hi,
                                      std::span<const double> y_lo) const {
  check_dim(diverging.size(), dim_, "StdfModel::diff_at_upper_limit");
  check_dim(y_hi.size(), dim_, "StdfModel::diff_at_upper_limit");
  check_dim(y_lo.size(), dim_, "StdfModel::diff_at_upper_limit");
  const bool any = std::find(diverging.begin(), diverging.end(), true) != diverging.end();
  if (!any) return eval(y_hi) - eval(y_lo);

  switch (variant_) {
    case StdfVariant::Independence: {
      double s = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (!diverging[j]) s += y_hi[j] - y_lo[j];
      }
      return s;
    }
    case StdfVariant::CompleteDependence:
      // The diverging coordinate dominates both maxima.
      return 0.0;
    case StdfVariant::Logistic: {
      if (theta_ == 1.0) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
          if (!diverging[j]) s += y_hi[j] - y_lo[j];
        }
        return s;
      }
      // (M^a + A)^theta - (M^a + B)^theta -> 0 for theta < 1.
      return 0.0;
    }
    case StdfVariant::DNormMonteCarlo: {
      // Rows where the diverging coordinates carry positive generator mass
      // contribute zero in the limit; the remaining rows reduce to the
      // restricted max difference.
      const Matrix& s = *sample_;
      double acc = 0.0;
      for (std::size_t i = 0; i < s.rows(); ++i) {
        auto v = s.row(i);
        bool dominated = false;
        for (std::size_t j = 0; j < dim_; ++j) {
          if (diverging[j] && v[columns_[j]] > 0.0) {
            dominated = true;
            break;
          }
        }
        if (dominated) continue;
        double hi = 0.0;
        double lo = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
          if (diverging[j]) continue;
          const double vj = v[columns_[j]];
          if (vj > 0.0) {
            hi = std::max(hi, y_hi[j] * vj);
            lo = std::max(lo, y_lo[j] * vj);
          }
        }
        acc += hi - lo;
      }
      return acc / static_cast<double>(s.rows());
    }
  }
  throw std::logic_error("diff_at_upper_limit: unreachable");
}

const Matrix& StdfModel::frozen_sample() const {
  if (variant_ != StdfVariant::DNormMonteCarlo || !sample_) {
    throw std::domain_error("StdfModel::frozen_sample: not a Monte Carlo model");
  }
  return *sample_;
}

}  // namespace mgpd
