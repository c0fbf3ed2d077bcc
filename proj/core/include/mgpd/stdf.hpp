#ifndef MGPD_STDF_HPP
#define MGPD_STDF_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mgpd/common.hpp"
#include "mgpd/rng.hpp"

namespace mgpd {

enum class StdfVariant { Independence, CompleteDependence, Logistic, DNormMonteCarlo };

/// A stable tail dependence function: convex, homogeneous of order one, and
/// bounded between the componentwise maximum and the sum. Models are
/// immutable after construction and safe to share across threads.
///
/// The Monte Carlo variant freezes a seeded sample of its generator V (with
/// unit column means enforced exactly) at construction, so repeated
/// evaluations are deterministic and the max-form and min-form estimates
/// share draws.
class StdfModel {
 public:
  /// Generator contract: fill the span with one draw of V in [0, inf)^d,
  /// E[V_j] = 1 for each j.
  using Generator = std::function<void(RngStream&, std::span<double>)>;

  static StdfModel independence(std::size_t dim);
  static StdfModel complete_dependence(std::size_t dim);
  /// Gumbel-Hougaard family with dependence parameter theta in (0, 1];
  /// theta = 1 is independence, theta -> 0 complete dependence.
  static StdfModel logistic(std::size_t dim, double theta);
  /// Frozen-sample Monte Carlo model over a user-supplied generator.
  static StdfModel dnorm_monte_carlo(std::size_t dim, const Generator& generator,
                                     std::size_t n_mc, std::uint64_t seed);
  /// Frozen-sample model over an already-drawn generator sample (rows are
  /// draws of V); columns are renormalized to unit sample means.
  static StdfModel dnorm_from_sample(Matrix sample);
  /// Frozen-sample model over the canonical generator of a closed-form
  /// variant (categorical for independence, constant for complete
  /// dependence, scaled Frechet for logistic). Used for exact-vs-MC checks.
  static StdfModel dnorm_of(const StdfModel& base, std::size_t n_mc, std::uint64_t seed);

  std::size_t dim() const { return dim_; }
  StdfVariant variant() const { return variant_; }
  double theta() const { return theta_; }
  bool is_monte_carlo() const { return variant_ == StdfVariant::DNormMonteCarlo; }

  /// l(y) for y >= 0.
  double eval(std::span<const double> y) const;
  /// l(y) together with the Monte Carlo standard error (zero for closed forms).
  McEstimate eval_mc(std::span<const double> y) const;

  /// Tail copula R(y): the alternating-sum identity for closed forms
  /// (capped at dim <= 20), E[min(y V)] over the frozen sample otherwise.
  double tail_copula(std::span<const double> y) const;

  /// The |J|-variate margin l_J; same family with restricted dimension for
  /// the parametric variants, column-restricted sample for Monte Carlo.
  StdfModel marginal(std::span<const std::size_t> index_set) const;

  /// (extremal coefficient l(1,...,1), tail dependence coefficient R(1,...,1)).
  std::pair<double, double> summary_coefficients() const;

  /// Partial derivatives of l, available for the closed-form variants.
  bool has_gradient() const;
  Vec gradient(std::span<const double> y) const;

  /// lim_{M -> inf} [ l(y_hi | M on B) - l(y_lo | M on B) ] where both
  /// arguments carry the same diverging coordinates B. Used to evaluate cdf
  /// differences by right-continuity at lower-endpoint coordinates.
  double diff_at_upper_limit(const std::vector<bool>& diverging, std::span<const double> y_hi,
                             std::span<const double> y_lo) const;

  /// Frozen generator sample (Monte Carlo variant only). Margins of a
  /// Monte Carlo model share the backing matrix; columns() gives the view.
  const Matrix& frozen_sample() const;
  std::span<const std::size_t> columns() const { return columns_; }

  /// Construction metadata when built through dnorm_of (empty otherwise):
  /// lets a frozen model be reproduced from {base variant, seed, n_mc}.
  struct McProvenance {
    StdfVariant base;
    double theta = 0.0;
    std::size_t n_mc = 0;
    std::uint64_t seed = 0;
  };
  const McProvenance* provenance() const { return provenance_ ? &*provenance_ : nullptr; }

 private:
  StdfModel(StdfVariant v, std::size_t dim) : variant_(v), dim_(dim) {}

  double eval_closed(std::span<const double> y) const;
  double inclusion_exclusion(std::span<const double> y) const;

  StdfVariant variant_;
  std::size_t dim_;
  double theta_ = 0.0;
  std::shared_ptr<const Matrix> sample_;  // DNormMonteCarlo; shared with margins
  std::vector<std::size_t> columns_;      // column view into *sample_
  std::optional<McProvenance> provenance_;
};

/// Canonical unit-mean generator of a closed-form variant (independence:
/// d e_K with K uniform; complete dependence: the all-ones vector; logistic:
/// iid Frechet(1/theta) scaled by 1/Gamma(1-theta), requiring theta < 1).
StdfModel::Generator canonical_generator(const StdfModel& base);

}  // namespace mgpd

#endif  // MGPD_STDF_HPP
