#include "mgpd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ratio_estimate.hpp"

namespace mgpd {

namespace {

using detail::ratio_estimate;

std::size_t categorical_draw(const Vec& cumulative, RngStream& rng) {
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
  return static_cast<std::size_t>(std::distance(cumulative.begin(), it));
}

}  // namespace

GeneratorLaw GeneratorLaw::t_law(std::size_t dim, Sampler s) {
  if (dim == 0) throw std::invalid_argument("GeneratorLaw: dim must be >= 1");
  return GeneratorLaw(Kind::T, dim, std::move(s));
}

GeneratorLaw GeneratorLaw::u_law(std::size_t dim, Sampler s) {
  if (dim == 0) throw std::invalid_argument("GeneratorLaw: dim must be >= 1");
  return GeneratorLaw(Kind::U, dim, std::move(s));
}

GeneratorLaw GeneratorLaw::r_law(Vec sigma, Vec gamma, Sampler s) {
  const std::size_t d = sigma.size();
  if (d == 0) throw std::invalid_argument("GeneratorLaw: dim must be >= 1");
  check_dim(gamma.size(), d, "GeneratorLaw::r_law");
  for (std::size_t j = 0; j < d; ++j) {
    if (!(sigma[j] > 0.0) || !(gamma[j] > 0.0)) {
      throw std::invalid_argument(
          "GeneratorLaw::r_law: sigma and gamma must be > 0 at index " + std::to_string(j));
    }
  }
  GeneratorLaw g(Kind::R, d, std::move(s));
  g.sigma_ = std::move(sigma);
  g.gamma_ = std::move(gamma);
  return g;
}

const Vec& GeneratorLaw::sigma() const {
  if (kind_ != Kind::R) throw std::logic_error("GeneratorLaw::sigma: R-kind only");
  return sigma_;
}

const Vec& GeneratorLaw::gamma() const {
  if (kind_ != Kind::R) throw std::logic_error("GeneratorLaw::gamma: R-kind only");
  return gamma_;
}

struct SpectralLaw::TiltData {
  Matrix pool;  // S rows with positive weight
  Vec weights;
  Vec cumulative;
  double weight_sum = 0.0;
};

SpectralLaw::SpectralLaw(std::size_t dim, Sampler s, std::optional<Vec> atom_probs)
    : dim_(dim), sampler_(std::move(s)), atom_probs_(std::move(atom_probs)) {
  if (dim_ == 0) throw std::invalid_argument("SpectralLaw: dim must be >= 1");
  if (atom_probs_) check_dim(atom_probs_->size(), dim_, "SpectralLaw: atom_probs");
}

void SpectralLaw::sample(RngStream& rng, std::span<double> out) const {
  check_dim(out.size(), dim_, "SpectralLaw::sample");
  sampler_(rng, out);
  if (max_of(out) != 0.0) {
    throw std::runtime_error("SpectralLaw::sample: draw violates max(S) = 0");
  }
}

double SpectralLaw::weighted_expectation(
    const std::function<double(std::span<const double>)>& g) const {
  if (!tilt_data_) {
    throw std::logic_error("SpectralLaw::weighted_expectation: no importance pool attached");
  }
  const TiltData& t = *tilt_data_;
  double acc = 0.0;
  for (std::size_t i = 0; i < t.pool.rows(); ++i) {
    acc += t.weights[i] * g(t.pool.row(i));
  }
  return acc / t.weight_sum;
}

SpectralLaw spectral_from_t(const GeneratorLaw& g, std::optional<Vec> atom_probs) {
  if (g.kind() != GeneratorLaw::Kind::T) {
    throw std::invalid_argument("spectral_from_t: generator is not T-kind");
  }
  const std::size_t d = g.dim();
  auto sampler = [g, d](RngStream& rng, std::span<double> out) {
    g.sample(rng, out);
    const double m = max_of(out);
    if (is_neg_inf(m)) {
      throw std::runtime_error("spectral_from_t: generator contract violated, max(T) = -inf");
    }
    for (double& v : out) v -= m;
  };
  return SpectralLaw(d, std::move(sampler), std::move(atom_probs));
}

SpectralLaw spectral_from_u(const GeneratorLaw& g, std::size_t pool_size, std::uint64_t seed) {
  if (g.kind() != GeneratorLaw::Kind::U) {
    throw std::invalid_argument("spectral_from_u: generator is not U-kind");
  }
  if (pool_size == 0) throw std::invalid_argument("spectral_from_u: pool_size must be >= 1");
  const std::size_t d = g.dim();

  RngStream rng(seed);
  Vec draw(d);
  Matrix pool(pool_size, d);
  Vec raw_max(pool_size);
  double shift = kNegInf;
  for (std::size_t i = 0; i < pool_size; ++i) {
    g.sample(rng, draw);
    const double m = max_of(draw);
    raw_max[i] = m;
    shift = std::max(shift, m);
    auto row = pool.row(i);
    if (is_neg_inf(m)) {
      std::fill(row.begin(), row.end(), 0.0);
    } else {
      for (std::size_t j = 0; j < d; ++j) row[j] = draw[j] - m;
    }
  }
  if (is_neg_inf(shift)) {
    throw std::runtime_error("spectral_from_u: all tilt weights are zero");
  }

  double wsum = 0.0;
  double wsum2 = 0.0;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < pool_size; ++i) {
    const double w = std::exp(raw_max[i] - shift);
    wsum += w;
    wsum2 += w * w;
    if (w > 0.0) ++kept;
  }
  if (!(wsum > 0.0)) {
    throw std::runtime_error("spectral_from_u: all tilt weights are zero");
  }

  auto data = std::make_shared<SpectralLaw::TiltData>();
  data->pool = Matrix(kept, d);
  data->weights.reserve(kept);
  data->cumulative.reserve(kept);
  double cum = 0.0;
  std::size_t r = 0;
  for (std::size_t i = 0; i < pool_size; ++i) {
    const double w = std::exp(raw_max[i] - shift);
    if (w <= 0.0) continue;
    auto dst = data->pool.row(r++);
    auto src = pool.row(i);
    std::copy(src.begin(), src.end(), dst.begin());
    data->weights.push_back(w);
    cum += w;
    data->cumulative.push_back(cum);
  }
  data->weight_sum = wsum;

  const double ess = wsum * wsum / wsum2;
  auto sampler = [data](RngStream& rng2, std::span<double> out) {
    const std::size_t idx = categorical_draw(data->cumulative, rng2);
    auto row = data->pool.row(idx);
    std::copy(row.begin(), row.end(), out.begin());
  };

  SpectralLaw law(d, std::move(sampler));
  law.tilt_info_ = SpectralLaw::TiltInfo{ess, pool_size,
                                         ess < static_cast<double>(pool_size) / 100.0};
  law.tilt_data_ = std::move(data);
  return law;
}

GeneratorLaw u_from_r(const GeneratorLaw& g) {
  if (g.kind() != GeneratorLaw::Kind::R) {
    throw std::invalid_argument("u_from_r: generator is not R-kind");
  }
  const Vec sigma = g.sigma();
  const Vec gamma = g.gamma();
  const std::size_t d = g.dim();
  auto sampler = [g, sigma, gamma, d](RngStream& rng, std::span<double> out) {
    g.sample(rng, out);
    for (std::size_t j = 0; j < d; ++j) {
      if (!(out[j] >= 0.0)) {
        throw std::runtime_error("u_from_r: R generator produced a negative component");
      }
      // R_j = 0 maps to U_j = -inf.
      out[j] = std::log(gamma[j] * out[j] / sigma[j]) / gamma[j];
    }
  };
  return GeneratorLaw::u_law(d, std::move(sampler));
}

namespace {

SpectralLaw logistic_spectral(std::span<const double> pi, std::size_t d, double theta) {
  // Tilting the scaled-Frechet generator by max(pi V) reduces, coordinate by
  // coordinate, to: argmax K with P(K = k) = pi_k^{1/theta}, then
  // q_j = pi_j^{1/theta} + r_j for j != K where, given a Gamma(1 - theta)
  // mixing variable L, the r_j are iid exponential with rate L; finally
  // S_j = log(pi_j) - theta log(q_j). The categorical weights sum to one
  // because l(pi) = 1.
  const double alpha = 1.0 / theta;
  Vec cumulative(d);
  Vec pi_pow(d);
  double cum = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    pi_pow[j] = std::pow(pi[j], alpha);
    cum += pi_pow[j];
    cumulative[j] = cum;
  }
  Vec log_pi(d);
  for (std::size_t j = 0; j < d; ++j) log_pi[j] = std::log(pi[j]);

  auto sampler = [d, theta, cumulative, pi_pow, log_pi](RngStream& rng, std::span<double> out) {
    const std::size_t k = categorical_draw(cumulative, rng);
    const double lambda = rng.gamma(1.0 - theta);
    for (std::size_t j = 0; j < d; ++j) {
      if (j == k) {
        out[j] = 0.0;
      } else {
        const double r = rng.exponential() / lambda;
        out[j] = log_pi[j] - theta * std::log(pi_pow[j] + r);
      }
    }
  };
  return SpectralLaw(d, std::move(sampler));
}

}  // namespace

SpectralLaw spectral_law(std::span<const double> pi, const StdfModel& ell) {
  const std::size_t d = ell.dim();
  check_dim(pi.size(), d, "spectral_law");
  if (std::abs(ell.eval(pi) - 1.0) > 1e-8) {
    throw std::invalid_argument("spectral_law: l(pi) must equal 1");
  }
  if (d == 1) {
    return SpectralLaw(1, [](RngStream&, std::span<double> out) { out[0] = 0.0; },
                       Vec{0.0});
  }
  switch (ell.variant()) {
    case StdfVariant::Independence: {
      Vec cumulative(d);
      double cum = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        cum += pi[j];
        cumulative[j] = cum;
      }
      Vec atoms(d);
      for (std::size_t j = 0; j < d; ++j) atoms[j] = 1.0 - pi[j];
      auto sampler = [d, cumulative](RngStream& rng, std::span<double> out) {
        const std::size_t k = categorical_draw(cumulative, rng);
        for (std::size_t j = 0; j < d; ++j) out[j] = (j == k) ? 0.0 : kNegInf;
      };
      return SpectralLaw(d, std::move(sampler), std::move(atoms));
    }
    case StdfVariant::CompleteDependence: {
      Vec s(d);
      for (std::size_t j = 0; j < d; ++j) s[j] = std::log(pi[j]);
      const double m = max_of(s);
      if (std::abs(m) > 1e-8) {
        throw std::invalid_argument("spectral_law: complete dependence requires max(pi) = 1");
      }
      for (double& v : s) v -= m;
      auto sampler = [s](RngStream&, std::span<double> out) {
        std::copy(s.begin(), s.end(), out.begin());
      };
      return SpectralLaw(d, std::move(sampler), Vec(d, 0.0));
    }
    case StdfVariant::Logistic: {
      const double theta = ell.theta();
      if (theta == 1.0) return spectral_law(pi, StdfModel::independence(d));
      return logistic_spectral(pi, d, theta);
    }
    case StdfVariant::DNormMonteCarlo: {
      // Tilting the frozen empirical generator is exact: the pool is the
      // sample itself, weighted by max_j(pi_j V_ij).
      const Matrix& sample = ell.frozen_sample();
      const auto cols = ell.columns();
      const std::size_t n = sample.rows();
      auto data = std::make_shared<Matrix>(n, d);
      Vec cumulative(n);
      double cum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        auto v = sample.row(i);
        double m = 0.0;
        for (std::size_t j = 0; j < d; ++j) m = std::max(m, pi[j] * v[cols[j]]);
        cum += m;
        cumulative[i] = cum;
        auto row = data->row(i);
        for (std::size_t j = 0; j < d; ++j) {
          const double w = pi[j] * v[cols[j]];
          row[j] = w > 0.0 ? std::log(w / m) : kNegInf;
        }
      }
      auto sampler = [data, cumulative](RngStream& rng, std::span<double> out) {
        const std::size_t idx = categorical_draw(cumulative, rng);
        auto row = data->row(idx);
        std::copy(row.begin(), row.end(), out.begin());
      };
      return SpectralLaw(d, std::move(sampler));
    }
  }
  throw std::logic_error("spectral_law: unreachable");
}

PiEll extract_pi_ell(const SpectralLaw& s, std::size_t n_mc, std::uint64_t seed) {
  if (n_mc == 0) throw std::invalid_argument("extract_pi_ell: n_mc must be >= 1");
  const std::size_t d = s.dim();
  RngStream rng(seed);
  Matrix draws(n_mc, d);
  for (std::size_t i = 0; i < n_mc; ++i) s.sample(rng, draws.row(i));

  Vec pi(d, 0.0);
  for (std::size_t i = 0; i < n_mc; ++i) {
    auto row = draws.row(i);
    for (std::size_t j = 0; j < d; ++j) pi[j] += std::exp(row[j]);
  }
  for (std::size_t j = 0; j < d; ++j) {
    pi[j] /= static_cast<double>(n_mc);
    if (!(pi[j] > 0.0)) {
      throw std::runtime_error("extract_pi_ell: condition S2 violated, coordinate " +
                               std::to_string(j) + " is degenerate at -inf");
    }
  }
  Matrix v(n_mc, d);
  for (std::size_t i = 0; i < n_mc; ++i) {
    auto row = draws.row(i);
    auto out = v.row(i);
    for (std::size_t j = 0; j < d; ++j) out[j] = std::exp(row[j]) / pi[j];
  }
  return PiEll{std::move(pi), StdfModel::dnorm_from_sample(std::move(v))};
}

SampleBatch simulate_gp(std::span<const double> sigma, std::span<const double> gamma,
                        const SpectralLaw& s, std::size_t n, std::uint64_t seed,
                        std::uint64_t stream_id) {
  const std::size_t d = s.dim();
  check_dim(sigma.size(), d, "simulate_gp");
  check_dim(gamma.size(), d, "simulate_gp");
  for (std::size_t j = 0; j < d; ++j) {
    if (!(sigma[j] > 0.0)) {
      throw std::invalid_argument("simulate_gp: sigma must be > 0 at index " + std::to_string(j));
    }
  }
  RngStream rng(seed, stream_id);
  SampleBatch batch;
  batch.data = Matrix(n, d);
  batch.seed = seed;
  batch.stream_id = stream_id;
  batch.representation = "spectral";
  Vec sdraw(d);
  for (std::size_t i = 0; i < n; ++i) {
    s.sample(rng, sdraw);
    const double e = rng.exponential();
    auto row = batch.data.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = sigma[j] * expm1_over_gamma(sdraw[j] + e, gamma[j]);
    }
  }
  return batch;
}

SampleBatch simulate_gp(const GpParams& h, std::size_t n, std::uint64_t seed,
                        std::uint64_t stream_id) {
  SampleBatch b = simulate_gp(h.sigma(), h.gamma(), spectral_law(h.pi(), h.ell()), n, seed,
                              stream_id);
  b.representation = "spectral-exact";
  return b;
}

McEstimate cdf_t(const GeneratorLaw& g, std::span<const double> z, std::size_t n_mc,
                 std::uint64_t seed) {
  if (g.kind() != GeneratorLaw::Kind::T) {
    throw std::invalid_argument("cdf_t: generator is not T-kind");
  }
  const std::size_t d = g.dim();
  check_dim(z.size(), d, "cdf_t");
  RngStream rng(seed);
  Vec t(d);
  double acc = 0.0;
  double acc2 = 0.0;
  for (std::size_t i = 0; i < n_mc; ++i) {
    g.sample(rng, t);
    const double m = max_of(t);
    if (is_neg_inf(m)) {
      throw std::runtime_error("cdf_t: generator contract violated, max(T) = -inf");
    }
    double mz = kNegInf;
    for (std::size_t j = 0; j < d; ++j) mz = std::max(mz, t[j] - z[j]);
    const double e = mz - m;
    const double v = e >= 0.0 ? 1.0 : std::exp(e);
    acc += v;
    acc2 += v * v;
  }
  const double nn = static_cast<double>(n_mc);
  const double mean = acc / nn;
  const double var = std::max(0.0, acc2 / nn - mean * mean);
  return {1.0 - mean, std::sqrt(var / nn), n_mc};
}

McEstimate cdf_u(const GeneratorLaw& g, std::span<const double> z, std::size_t n_mc,
                 std::uint64_t seed) {
  if (g.kind() != GeneratorLaw::Kind::U) {
    throw std::invalid_argument("cdf_u: generator is not U-kind");
  }
  const std::size_t d = g.dim();
  check_dim(z.size(), d, "cdf_u");
  RngStream rng(seed);
  Vec u(d);
  Vec log_num(n_mc);
  Vec log_den(n_mc);
  double shift = kNegInf;
  for (std::size_t i = 0; i < n_mc; ++i) {
    g.sample(rng, u);
    const double m = max_of(u);
    double mz = kNegInf;
    for (std::size_t j = 0; j < d; ++j) mz = std::max(mz, u[j] - z[j]);
    log_den[i] = m;
    // exp(max U) and exp(max(U - z)) enter through their minimum; together
    // with the z and 0 branch of the cdf this is the weighted version of the
    // T-kind integrand 1 and exp(max(T - z) - max T).
    log_num[i] = std::min(m, mz);
    shift = std::max(shift, log_den[i]);
  }
  if (is_neg_inf(shift)) throw std::runtime_error("cdf_u: E[exp(max U)] vanishes on the sample");
  Vec num(n_mc);
  Vec den(n_mc);
  for (std::size_t i = 0; i < n_mc; ++i) {
    num[i] = std::exp(log_num[i] - shift);
    den[i] = std::exp(log_den[i] - shift);
  }
  const McEstimate r = ratio_estimate(num, den);
  return {1.0 - r.value, r.se, n_mc};
}

McEstimate cdf_r(const GeneratorLaw& g, std::span<const double> x, std::size_t n_mc,
                 std::uint64_t seed) {
  if (g.kind() != GeneratorLaw::Kind::R) {
    throw std::invalid_argument("cdf_r: generator is not R-kind");
  }
  const std::size_t d = g.dim();
  check_dim(x.size(), d, "cdf_r");
  const Vec& sigma = g.sigma();
  const Vec& gamma = g.gamma();
  Vec log_hi(d);
  Vec log_lo(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (!(sigma[j] + gamma[j] * x[j] > 0.0)) {
      throw std::domain_error("cdf_r: coordinate " + std::to_string(j) +
                              " lies outside the support");
    }
    log_lo[j] = -log1p_over_gamma(x[j] / sigma[j], gamma[j]);
    log_hi[j] = x[j] < 0.0 ? log_lo[j] : 0.0;
  }
  RngStream rng(seed);
  Vec r(d);
  Vec lhi(n_mc);
  Vec llo(n_mc);
  Vec lden(n_mc);
  double shift = kNegInf;
  for (std::size_t i = 0; i < n_mc; ++i) {
    g.sample(rng, r);
    double hi = kNegInf;
    double lo = kNegInf;
    double den = kNegInf;
    for (std::size_t j = 0; j < d; ++j) {
      if (!(r[j] >= 0.0)) {
        throw std::runtime_error("cdf_r: R generator produced a negative component");
      }
      const double uj = std::log(gamma[j] * r[j] / sigma[j]) / gamma[j];
      hi = std::max(hi, log_hi[j] + uj);
      lo = std::max(lo, log_lo[j] + uj);
      den = std::max(den, uj);
    }
    lhi[i] = hi;
    llo[i] = lo;
    lden[i] = den;
    shift = std::max(shift, std::max(hi, den));
  }
  if (is_neg_inf(shift)) throw std::runtime_error("cdf_r: degenerate generator sample");
  Vec diff(n_mc);
  Vec den(n_mc);
  for (std::size_t i = 0; i < n_mc; ++i) {
    diff[i] = std::exp(lhi[i] - shift) - std::exp(llo[i] - shift);
    den[i] = std::exp(lden[i] - shift);
  }
  return ratio_estimate(diff, den);
}

}  // namespace mgpd
