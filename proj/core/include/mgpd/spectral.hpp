#ifndef MGPD_SPECTRAL_HPP
#define MGPD_SPECTRAL_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mgpd/common.hpp"
#include "mgpd/params.hpp"
#include "mgpd/rng.hpp"
#include "mgpd/stdf.hpp"

namespace mgpd {

/// A seeded batch of simulated observations with its provenance. Rows are
/// observations; lower-boundary coordinates are stored as -sigma_j/gamma_j
/// (gamma_j > 0) or -inf (gamma_j <= 0).
struct SampleBatch {
  Matrix data;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::string representation;
  std::string model_json;  // optional model description carried to the sidecar

  std::size_t n() const { return data.rows(); }
  std::size_t dim() const { return data.cols(); }
};

/// Law of a generator vector in one of the three constructions:
///   T: values in [-inf, inf)^d with max(T) > -inf a.s.;
///   U: values in [-inf, inf)^d with 0 < E[exp(U_j)] < inf;
///   R: values in [0, inf)^d with 0 < E[R_j^{1/gamma_j}] < inf, carrying its
///      marginal (sigma, gamma) with gamma > 0.
class GeneratorLaw {
 public:
  enum class Kind { T, U, R };
  using Sampler = std::function<void(RngStream&, std::span<double>)>;

  static GeneratorLaw t_law(std::size_t dim, Sampler s);
  static GeneratorLaw u_law(std::size_t dim, Sampler s);
  static GeneratorLaw r_law(Vec sigma, Vec gamma, Sampler s);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  void sample(RngStream& rng, std::span<double> out) const { sampler_(rng, out); }
  const Vec& sigma() const;
  const Vec& gamma() const;

 private:
  GeneratorLaw(Kind k, std::size_t dim, Sampler s)
      : kind_(k), dim_(dim), sampler_(std::move(s)) {}

  Kind kind_;
  std::size_t dim_;
  Sampler sampler_;
  Vec sigma_;  // R-kind only
  Vec gamma_;  // R-kind only
};

/// Law of a spectral vector S in [-inf, 0]^d with max(S) = 0 on every draw.
/// Laws built by exponential tilting carry their importance pool, exposing
/// the effective sample size and an unbiased weighted-expectation evaluator.
class SpectralLaw {
 public:
  using Sampler = std::function<void(RngStream&, std::span<double>)>;

  SpectralLaw(std::size_t dim, Sampler s, std::optional<Vec> atom_probs = std::nullopt);

  std::size_t dim() const { return dim_; }

  /// One draw; throws if the produced vector violates max(S) = 0.
  void sample(RngStream& rng, std::span<double> out) const;

  /// Per-coordinate P(S_j = -inf) when known at construction.
  const std::optional<Vec>& atom_probs() const { return atom_probs_; }

  struct TiltInfo {
    double ess = 0.0;
    std::size_t pool_size = 0;
    bool low_ess_warning = false;
  };
  const std::optional<TiltInfo>& tilt_info() const { return tilt_info_; }

  /// E[g(S)] computed as a weighted average over the importance pool
  /// (tilted laws only); free of resampling bias.
  double weighted_expectation(const std::function<double(std::span<const double>)>& g) const;

 private:
  friend SpectralLaw spectral_from_u(const GeneratorLaw& g, std::size_t pool_size,
                                     std::uint64_t seed);
  struct TiltData;

  std::size_t dim_;
  Sampler sampler_;
  std::optional<Vec> atom_probs_;
  std::optional<TiltInfo> tilt_info_;
  std::shared_ptr<const TiltData> tilt_data_;
};

/// S = T - max(T). Draws with max(T) = -inf violate the generator contract
/// and raise std::runtime_error. Known atom probabilities P(T_j = -inf) may
/// be passed through.
SpectralLaw spectral_from_t(const GeneratorLaw& g,
                            std::optional<Vec> atom_probs = std::nullopt);

/// The exponentially tilted law of S drawn by importance resampling: a pool
/// of proposals U^(i) is frozen at construction, weighted by exp(max U^(i)),
/// and draws resample pool indices proportionally. Throws if every weight
/// vanishes; an effective sample size below pool_size / 100 sets the
/// low-ess warning in tilt_info().
SpectralLaw spectral_from_u(const GeneratorLaw& g, std::size_t pool_size, std::uint64_t seed);

/// Image law U = log(gamma R / sigma) / gamma of an R-kind generator;
/// R_j = 0 maps to U_j = -inf.
GeneratorLaw u_from_r(const GeneratorLaw& g);

/// Exact spectral law of a (pi, ell) pair for the closed-form and
/// frozen-sample stdf variants:
///   independence        categorical over coordinates, P(K = j) = pi_j;
///   complete dependence S = log(pi), deterministic;
///   logistic            argmax K with P(K = k) = pi_k^{1/theta}, remaining
///                       coordinates from a gamma-mixed multivariate Lomax;
///   Monte Carlo         max-weighted categorical over the frozen rows.
SpectralLaw spectral_law(std::span<const double> pi, const StdfModel& ell);

struct PiEll {
  Vec pi;
  StdfModel ell;
};

/// Freezes n_mc draws of S and returns pi_j = mean(exp(S_j)) together with
/// the frozen-sample stdf generated by V_j = exp(S_j) / pi_j. A coordinate
/// with every draw at -inf violates condition S2 and raises
/// std::runtime_error.
PiEll extract_pi_ell(const SpectralLaw& s, std::size_t n_mc, std::uint64_t seed);

/// X = sigma (e^{gamma (S + E)} - 1) / gamma rowwise, E unit exponential
/// independent of S. Every row has at least one positive coordinate.
SampleBatch simulate_gp(std::span<const double> sigma, std::span<const double> gamma,
                        const SpectralLaw& s, std::size_t n, std::uint64_t seed,
                        std::uint64_t stream_id = 0);

/// Convenience overload: simulate from the exact spectral law of h.
SampleBatch simulate_gp(const GpParams& h, std::size_t n, std::uint64_t seed,
                        std::uint64_t stream_id = 0);

/// Monte Carlo cdf of the standardized law built from a T-kind generator:
/// H(z) = 1 - E[1 and exp(max(T - z) - max T)].
McEstimate cdf_t(const GeneratorLaw& g, std::span<const double> z, std::size_t n_mc,
                 std::uint64_t seed);

/// Monte Carlo cdf of the standardized law built from a U-kind generator:
/// H(z) = 1 - E[exp(max U) and exp(max(U - z))] / E[exp(max U)], the
/// tilt-weighted form of the T-kind integrand.
McEstimate cdf_u(const GeneratorLaw& g, std::span<const double> z, std::size_t n_mc,
                 std::uint64_t seed);

/// Monte Carlo cdf of the R-kind law on the observation scale, evaluated
/// through the ratio-of-maxima identity with U = log(gamma R / sigma)/gamma.
McEstimate cdf_r(const GeneratorLaw& g, std::span<const double> x, std::size_t n_mc,
                 std::uint64_t seed);

}  // namespace mgpd

#endif  // MGPD_SPECTRAL_HPP
