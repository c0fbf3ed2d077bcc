#ifndef MGPD_COMMON_HPP
#define MGPD_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgpd {

using Vec = std::vector<double>;

/// Shape parameters with |gamma| below this threshold take the gamma = 0
/// limit branch of (1 + gamma x)^{1/gamma} and friends.
inline constexpr double kGammaZeroTol = 1e-12;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

inline bool is_neg_inf(double x) { return x == kNegInf; }

/// Lower-boundary coordinates live at -inf on the standardized scale.
/// The arithmetic rules used throughout: exp(-inf) = 0, -inf + finite = -inf,
/// and 0 * (-inf) = 0 (a zero coefficient deselects the coordinate).
inline double exp_lb(double x) { return std::exp(x); }

/// Product with the 0 * (-inf) = 0 convention.
inline double prod_zero_rule(double a, double x) {
  if (a == 0.0) return 0.0;
  return a * x;
}

inline double max_of(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  return m;
}

inline double min_of(std::span<const double> v) {
  double m = kPosInf;
  for (double x : v) m = std::min(m, x);
  return m;
}

inline double sum_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

/// (1 + gamma u)^{-1/gamma}, read as exp(-u) at gamma = 0.
/// At 1 + gamma u == 0 the boundary limit is returned: +inf for gamma > 0
/// (lower endpoint), 0 for gamma < 0 (upper endpoint).
inline double pareto_decay(double u, double gamma) {
  if (std::abs(gamma) < kGammaZeroTol) return std::exp(-u);
  const double base = 1.0 + gamma * u;
  if (base < 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (base == 0.0) return gamma > 0.0 ? kPosInf : 0.0;
  return std::exp(-std::log1p(gamma * u) / gamma);
}

/// log(1 + gamma u) / gamma, read as u at gamma = 0.
inline double log1p_over_gamma(double u, double gamma) {
  if (std::abs(gamma) < kGammaZeroTol) return u;
  return std::log1p(gamma * u) / gamma;
}

/// (exp(gamma z) - 1) / gamma, read as z at gamma = 0.
inline double expm1_over_gamma(double z, double gamma) {
  if (std::abs(gamma) < kGammaZeroTol) return z;
  return std::expm1(gamma * z) / gamma;
}

/// A Monte Carlo estimate with its standard error.
struct McEstimate {
  double value = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

/// Dense row-major matrix, sized once.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline void check_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch, got " +
                                std::to_string(got) + ", expected " + std::to_string(want));
  }
}

inline void check_nonneg(std::span<const double> y, const char* what) {
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (!(y[j] >= 0.0)) {
      throw std::invalid_argument(std::string(what) + ": negative component at index " +
                                  std::to_string(j));
    }
  }
}

}  // namespace mgpd

#endif  // MGPD_COMMON_HPP
