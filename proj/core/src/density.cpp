#include "mgpd/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mgpd {

namespace {

bool in_negative_orthant(std::span<const double> z) {
  for (double v : z) {
    if (v > 0.0) return false;
  }
  return true;
}

}  // namespace

double density_std_t(const DensityFn& f_t, std::span<const double> z,
                     const QuadratureConfig& cfg) {
  if (in_negative_orthant(z)) return 0.0;
  const std::size_t d = z.size();
  Vec shifted(d);
  const double integral = integrate_real_line(
      [&](double r) {
        for (std::size_t j = 0; j < d; ++j) shifted[j] = z[j] + r;
        return f_t(shifted);
      },
      cfg);
  return std::exp(-max_of(z)) * integral;
}

double density_std_u(const DensityFn& f_u, double norm, std::span<const double> z,
                     const QuadratureConfig& cfg) {
  if (!(norm > 0.0)) throw std::invalid_argument("density_std_u: norm must be > 0");
  if (in_negative_orthant(z)) return 0.0;
  const std::size_t d = z.size();
  Vec shifted(d);
  const double integral = integrate_real_line(
      [&](double s) {
        for (std::size_t j = 0; j < d; ++j) shifted[j] = z[j] + s;
        return std::exp(s) * f_u(shifted);
      },
      cfg);
  return integral / norm;
}

double density_r(const DensityFn& f_r, std::span<const double> sigma,
                 std::span<const double> gamma, double norm, std::span<const double> x,
                 const QuadratureConfig& cfg) {
  if (!(norm > 0.0)) throw std::invalid_argument("density_r: norm must be > 0");
  const std::size_t d = x.size();
  check_dim(sigma.size(), d, "density_r");
  check_dim(gamma.size(), d, "density_r");
  double gamma_sum = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    if (!(gamma[j] > 0.0) || !(sigma[j] > 0.0)) {
      throw std::invalid_argument("density_r: requires sigma > 0 and gamma > 0");
    }
    if (!(sigma[j] + gamma[j] * x[j] > 0.0)) {
      throw std::domain_error("density_r: coordinate " + std::to_string(j) +
                              " lies outside the support");
    }
    gamma_sum += gamma[j];
  }
  if (in_negative_orthant(x)) return 0.0;
  Vec arg(d);
  const double integral = integrate_positive_axis(
      [&](double t) {
        for (std::size_t j = 0; j < d; ++j) {
          arg[j] = std::pow(t, gamma[j]) * (x[j] + sigma[j] / gamma[j]);
        }
        return f_r(arg) * std::pow(t, gamma_sum);
      },
      cfg);
  return integral / norm;
}

double density_std_s(const DensityFn& f_s, std::span<const double> z) {
  if (in_negative_orthant(z)) return 0.0;
  const double m = max_of(z);
  Vec face(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) face[j] = z[j] - m;
  return f_s(face) * std::exp(-m);
}

double density_general(std::span<const double> sigma, std::span<const double> gamma,
                       const DensityFn& std_density, std::span<const double> x) {
  const std::size_t d = x.size();
  check_dim(sigma.size(), d, "density_general");
  check_dim(gamma.size(), d, "density_general");
  Vec z(d);
  double jacobian = 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double denom = sigma[j] + gamma[j] * x[j];
    if (!(denom > 0.0)) {
      throw std::domain_error("density_general: coordinate " + std::to_string(j) +
                              " lies outside the support");
    }
    z[j] = log1p_over_gamma(x[j] / sigma[j], gamma[j]);
    jacobian /= denom;
  }
  return std_density(z) * jacobian;
}

McEstimate estimate_norm_u(const GeneratorLaw& g, std::size_t n_mc, std::uint64_t seed) {
  if (g.kind() != GeneratorLaw::Kind::U) {
    throw std::invalid_argument("estimate_norm_u: generator is not U-kind");
  }
  RngStream rng(seed);
  Vec u(g.dim());
  double acc = 0.0;
  double acc2 = 0.0;
  for (std::size_t i = 0; i < n_mc; ++i) {
    g.sample(rng, u);
    const double v = std::exp(max_of(u));
    acc += v;
    acc2 += v * v;
  }
  const double nn = static_cast<double>(n_mc);
  const double mean = acc / nn;
  const double var = std::max(0.0, acc2 / nn - mean * mean);
  return {mean, std::sqrt(var / nn), n_mc};
}

McEstimate estimate_norm_r(const GeneratorLaw& g, std::size_t n_mc, std::uint64_t seed) {
  if (g.kind() != GeneratorLaw::Kind::R) {
    throw std::invalid_argument("estimate_norm_r: generator is not R-kind");
  }
  const Vec& sigma = g.sigma();
  const Vec& gamma = g.gamma();
  RngStream rng(seed);
  Vec r(g.dim());
  double acc = 0.0;
  double acc2 = 0.0;
  for (std::size_t i = 0; i < n_mc; ++i) {
    g.sample(rng, r);
    double m = 0.0;
    for (std::size_t j = 0; j < g.dim(); ++j) {
      m = std::max(m, std::pow(gamma[j] * r[j] / sigma[j], 1.0 / gamma[j]));
    }
    acc += m;
    acc2 += m * m;
  }
  const double nn = static_cast<double>(n_mc);
  const double mean = acc / nn;
  const double var = std::max(0.0, acc2 / nn - mean * mean);
  return {mean, std::sqrt(var / nn), n_mc};
}

double DensityModel::operator()(std::span<const double> z) const {
  check_dim(z.size(), dim, "DensityModel");
  switch (kind) {
    case Kind::T:
      return density_std_t(f, z, quadrature);
    case Kind::U:
      return density_std_u(f, norm, z, quadrature);
    case Kind::R:
      return density_r(f, sigma, gamma, norm, z, quadrature);
    case Kind::S:
      return density_std_s(f, z);
  }
  throw std::logic_error("DensityModel: unreachable");
}

}  // namespace mgpd
