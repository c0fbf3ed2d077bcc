#include "mgpd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ratio_estimate.hpp"

namespace mgpd {

double margin_cdf(const GpParams& h, std::size_t j, double x) {
  const std::size_t d = h.dim();
  if (j >= d) throw std::invalid_argument("margin_cdf: index out of range");
  const double sigma = h.sigma()[j];
  const double gamma = h.gamma()[j];
  if (std::abs(gamma) >= kGammaZeroTol && sigma + gamma * x < 0.0) {
    throw std::domain_error("margin_cdf: argument below the support of coordinate " +
                            std::to_string(j));
  }
  const double decay = pareto_decay(x / sigma, gamma);
  if (x >= 0.0) return 1.0 - h.pi()[j] * decay;

  // l(pi_1, ..., pi_j y, ..., pi_d) - l(pi_j y e_j), the second term by the
  // unit-vector property; at y = +inf both terms diverge together and the
  // limit is the boundary mass.
  Vec y_hi(h.pi().begin(), h.pi().end());
  Vec y_lo(d, 0.0);
  y_hi[j] = h.pi()[j] * decay;
  y_lo[j] = y_hi[j];
  std::vector<bool> diverging(d, false);
  if (y_hi[j] == kPosInf) diverging[j] = true;
  const double v = h.ell().diff_at_upper_limit(diverging, y_hi, y_lo);
  return std::clamp(v, 0.0, 1.0);
}

MarginalEndpoints lower_endpoints(const GpParams& h) {
  const std::size_t d = h.dim();
  MarginalEndpoints e;
  e.eta.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    e.eta[j] = h.gamma()[j] > 0.0 ? -h.sigma()[j] / h.gamma()[j] : kNegInf;
  }
  return e;
}

AtomMassResult atom_mass_eps_limit(const GpParams& h, std::size_t j) {
  const std::size_t d = h.dim();
  if (j >= d) throw std::invalid_argument("atom_mass_eps_limit: index out of range");
  if (d == 1) return {0.0, 0, 0.0};

  const double pij = h.pi()[j];
  Vec arg(d);
  auto f = [&](double eps) {
    for (std::size_t k = 0; k < d; ++k) arg[k] = (k == j) ? pij : eps * h.pi()[k];
    return (h.ell().eval(arg) - pij) / eps;
  };

  constexpr int k_lo = 4;
  constexpr int k_hi = 20;
  constexpr double tol = 1e-6;
  double f_prev = f(std::ldexp(1.0, -k_lo));
  double f_prev2 = 0.0;
  double cand_prev = f_prev;
  bool have_two = false;
  AtomMassResult out;
  out.evaluations = 1;
  for (int k = k_lo + 1; k <= k_hi; ++k) {
    const double fk = f(std::ldexp(1.0, -k));
    ++out.evaluations;
    // Aitken acceleration over the last three iterates when the geometric
    // pattern is informative; plain iterate otherwise.
    double cand = fk;
    if (have_two) {
      const double d1 = f_prev - f_prev2;
      const double d2 = fk - f_prev;
      const double denom = d2 - d1;
      if (std::abs(denom) > 1e-14 * std::max(1.0, std::abs(fk))) {
        cand = fk - d2 * d2 / denom;
      }
    }
    out.last_delta = std::abs(fk - f_prev);
    const double cand_delta = std::abs(cand - cand_prev);
    if (out.last_delta < tol || cand_delta < tol) {
      out.value = std::max(0.0, cand);
      return out;
    }
    f_prev2 = f_prev;
    f_prev = fk;
    cand_prev = cand;
    have_two = true;
  }
  std::ostringstream msg;
  msg << "atom_mass_eps_limit: no convergence; last two iterates f(2^-" << (k_hi - 1)
      << ") = " << f_prev2 << ", f(2^-" << k_hi << ") = " << f_prev;
  throw std::runtime_error(msg.str());
}

double atom_mass_gradient(const GpParams& h, std::size_t j) {
  const std::size_t d = h.dim();
  if (j >= d) throw std::invalid_argument("atom_mass_gradient: index out of range");
  if (!h.ell().has_gradient()) {
    throw std::domain_error(
        "atom_mass_gradient: l carries no smoothness certificate; use the epsilon limit or a "
        "generator route");
  }
  if (d == 1) return 0.0;
  Vec point(d, 0.0);
  point[j] = h.pi()[j];
  const Vec grad = h.ell().gradient(point);
  double mass = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    if (k != j) mass += h.pi()[k] * grad[k];
  }
  return mass;
}

McEstimate atom_mass_generator(const GeneratorLaw& g, std::size_t j, std::size_t n_mc,
                               std::uint64_t seed) {
  if (j >= g.dim()) throw std::invalid_argument("atom_mass_generator: index out of range");
  if (n_mc == 0) throw std::invalid_argument("atom_mass_generator: n_mc must be >= 1");
  RngStream rng(seed);
  Vec draw(g.dim());
  const double nn = static_cast<double>(n_mc);
  switch (g.kind()) {
    case GeneratorLaw::Kind::T: {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < n_mc; ++i) {
        g.sample(rng, draw);
        if (is_neg_inf(draw[j])) ++hits;
      }
      const double p = static_cast<double>(hits) / nn;
      return {p, std::sqrt(std::max(0.0, p * (1.0 - p) / nn)), n_mc};
    }
    case GeneratorLaw::Kind::U: {
      // Two-pass ratio with a shared shift to avoid overflow in e^{max U}.
      Vec log_w(n_mc);
      std::vector<char> hit(n_mc);
      double shift = kNegInf;
      for (std::size_t i = 0; i < n_mc; ++i) {
        g.sample(rng, draw);
        log_w[i] = max_of(draw);
        hit[i] = is_neg_inf(draw[j]) ? 1 : 0;
        shift = std::max(shift, log_w[i]);
      }
      if (is_neg_inf(shift)) {
        throw std::runtime_error("atom_mass_generator: E[exp(max U)] vanishes on the sample");
      }
      Vec num(n_mc);
      Vec den(n_mc);
      for (std::size_t i = 0; i < n_mc; ++i) {
        den[i] = std::exp(log_w[i] - shift);
        num[i] = hit[i] ? den[i] : 0.0;
      }
      return detail::ratio_estimate(num, den);
    }
    case GeneratorLaw::Kind::R:
      throw std::invalid_argument("atom_mass_generator: use u_from_r for R-kind generators");
  }
  throw std::logic_error("atom_mass_generator: unreachable");
}

McEstimate atom_mass_spectral(const SpectralLaw& s, std::size_t j, std::size_t n_mc,
                              std::uint64_t seed) {
  if (j >= s.dim()) throw std::invalid_argument("atom_mass_spectral: index out of range");
  if (s.atom_probs()) return {(*s.atom_probs())[j], 0.0, 0};
  if (n_mc == 0) throw std::invalid_argument("atom_mass_spectral: n_mc must be >= 1");
  RngStream rng(seed);
  Vec draw(s.dim());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n_mc; ++i) {
    s.sample(rng, draw);
    if (is_neg_inf(draw[j])) ++hits;
  }
  const double nn = static_cast<double>(n_mc);
  const double p = static_cast<double>(hits) / nn;
  return {p, std::sqrt(std::max(0.0, p * (1.0 - p) / nn)), n_mc};
}

ExceedanceProbs exceedance_probs(const GpParams& h, std::span<const double> x) {
  const std::size_t d = h.dim();
  check_dim(x.size(), d, "exceedance_probs");
  Vec s(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (!(x[j] >= 0.0)) {
      throw std::invalid_argument("exceedance_probs: requires x >= 0, violated at index " +
                                  std::to_string(j));
    }
    s[j] = h.marginal_survival(j, x[j]);
  }
  return {h.ell().eval(s), h.ell().tail_copula(s)};
}

GpParams conditional_excess(const GpParams& h, const ConditionalSpec& spec) {
  const auto& J = spec.indices;
  if (J.empty()) throw std::invalid_argument("conditional_excess: empty index set");
  check_dim(spec.thresholds.size(), J.size(), "conditional_excess: thresholds");
  const std::size_t k = J.size();
  Vec sigma(k);
  Vec gamma(k);
  Vec tau(k);
  for (std::size_t a = 0; a < k; ++a) {
    const std::size_t j = J[a];
    if (j >= h.dim()) throw std::invalid_argument("conditional_excess: index out of range");
    const double u = spec.thresholds[a];
    if (!(u >= 0.0)) {
      throw std::invalid_argument("conditional_excess: thresholds must be >= 0");
    }
    tau[a] = h.marginal_survival(j, u);
    if (!(tau[a] > 0.0)) {
      throw std::domain_error("conditional_excess: P[X_j > u_j] = 0 for coordinate " +
                              std::to_string(j));
    }
    sigma[a] = h.sigma()[j] + h.gamma()[j] * u;
    gamma[a] = h.gamma()[j];
  }
  return GpParams(std::move(sigma), std::move(gamma), std::move(tau), h.ell().marginal(J));
}

LinearCombination linear_combination(const GpParams& h, const SpectralLaw& s,
                                     const CombinationSpec& spec, std::size_t n_mc,
                                     std::uint64_t seed) {
  const std::size_t d = h.dim();
  check_dim(s.dim(), d, "linear_combination: spectral law");
  const Matrix& a = spec.coefficients;
  if (a.rows() == 0 || a.cols() != d) {
    throw std::invalid_argument("linear_combination: coefficient matrix must be m x d");
  }
  const std::size_t m = a.rows();
  const double gamma = h.gamma()[0];
  for (std::size_t j = 1; j < d; ++j) {
    if (std::abs(h.gamma()[j] - gamma) > 1e-12) {
      throw std::invalid_argument(
          "linear_combination: unsupported case, shape parameters must be equal");
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (!(a(i, j) >= 0.0)) {
        throw std::invalid_argument("linear_combination: coefficients must be nonnegative");
      }
    }
  }
  Vec scale(m, 0.0);
  Matrix p(m, d);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) scale[i] += a(i, j) * h.sigma()[j];
    if (!(scale[i] > 0.0)) {
      throw std::invalid_argument("linear_combination: row " + std::to_string(i) +
                                  " has A_i sigma = 0");
    }
    for (std::size_t j = 0; j < d; ++j) p(i, j) = a(i, j) * h.sigma()[j] / scale[i];
  }

  const bool zero_gamma = std::abs(gamma) < kGammaZeroTol;
  auto map_u = [p, m, d, gamma, zero_gamma](std::span<const double> sdraw,
                                            std::span<double> out) {
    for (std::size_t i = 0; i < m; ++i) {
      if (zero_gamma) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += prod_zero_rule(p(i, j), sdraw[j]);
        out[i] = acc;
      } else {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          acc += prod_zero_rule(p(i, j), std::exp(gamma * sdraw[j]));
        }
        out[i] = std::log(acc) / gamma;
      }
    }
  };

  // Frozen spectral sample mapped through U_i for the survival evaluator.
  auto u_sample = std::make_shared<Matrix>(n_mc, m);
  {
    RngStream rng(seed);
    Vec sdraw(d);
    for (std::size_t i = 0; i < n_mc; ++i) {
      s.sample(rng, sdraw);
      map_u(sdraw, u_sample->row(i));
    }
  }

  auto survival = [u_sample, scale, gamma, m](std::span<const double> x) -> McEstimate {
    check_dim(x.size(), m, "linear_combination survival");
    Vec decay(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (!(scale[i] + gamma * x[i] > 0.0)) {
        throw std::domain_error("linear_combination survival: coordinate " + std::to_string(i) +
                                " lies outside the support");
      }
      decay[i] = -log1p_over_gamma(x[i] / scale[i], gamma);
    }
    const std::size_t n = u_sample->rows();
    double acc = 0.0;
    double acc2 = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      auto u = u_sample->row(r);
      double me = kNegInf;
      for (std::size_t i = 0; i < m; ++i) me = std::max(me, decay[i] + u[i]);
      const double v = me >= 0.0 ? 1.0 : std::exp(me);
      acc += v;
      acc2 += v * v;
    }
    const double nn = static_cast<double>(n);
    const double mean = acc / nn;
    const double var = std::max(0.0, acc2 / nn - mean * mean);
    return {mean, std::sqrt(var / nn), n};
  };

  auto u_sampler = [s, map_u, d](RngStream& rng, std::span<double> out) {
    Vec sdraw(d);
    s.sample(rng, sdraw);
    map_u(sdraw, out);
  };

  return LinearCombination{std::move(survival), GeneratorLaw::u_law(m, std::move(u_sampler)),
                           std::move(scale), gamma};
}

}  // namespace mgpd
