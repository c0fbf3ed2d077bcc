#ifndef MGPD_ANALYSIS_HPP
#define MGPD_ANALYSIS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mgpd/common.hpp"
#include "mgpd/params.hpp"
#include "mgpd/spectral.hpp"

namespace mgpd {

/// Marginal cdf H_j(x). For x >= 0 this is 1 - pi_j (1 + gamma_j x/sigma_j)^{-1/gamma_j};
/// below zero it evaluates l at the inflated j-th argument; exactly at the
/// lower endpoint it returns the boundary mass by right-continuity.
double margin_cdf(const GpParams& h, std::size_t j, double x);

MarginalEndpoints lower_endpoints(const GpParams& h);

/// Mass at the lower boundary {x_j = eta_j} by the scaled-epsilon limit,
/// run over eps = 2^-k, k = 4..20, with Aitken stabilization; declared
/// converged when two successive iterates differ by less than 1e-6.
/// Non-convergence raises std::runtime_error carrying the last two iterates.
struct AtomMassResult {
  double value = 0.0;
  std::size_t evaluations = 0;
  double last_delta = 0.0;
};
AtomMassResult atom_mass_eps_limit(const GpParams& h, std::size_t j);

/// Mass at the lower boundary from the partial derivatives of l at pi_j e_j;
/// closed-form variants only.
double atom_mass_gradient(const GpParams& h, std::size_t j);

/// Mass at the lower boundary from a generator law:
///   T-kind: P(T_j = -inf);  U-kind: E[e^{max U} 1{U_j = -inf}] / E[e^{max U}].
McEstimate atom_mass_generator(const GeneratorLaw& g, std::size_t j, std::size_t n_mc,
                               std::uint64_t seed);

/// Mass at the lower boundary from a spectral law: P(S_j = -inf), exact when
/// the law carries atom probabilities, estimated otherwise.
McEstimate atom_mass_spectral(const SpectralLaw& s, std::size_t j, std::size_t n_mc,
                              std::uint64_t seed);

struct ExceedanceProbs {
  double any = 0.0;  // P(exists j: X_j > x_j) = l(survivals)
  double all = 0.0;  // P(forall j: X_j > x_j) = R(survivals)
};
ExceedanceProbs exceedance_probs(const GpParams& h, std::span<const double> x);

/// A conditioning event: excesses of u over the coordinates J.
struct ConditionalSpec {
  std::vector<std::size_t> indices;
  Vec thresholds;
};

/// Law of (X_J - u | X_J not<= u): scale sigma_J + gamma_J u, shape gamma_J,
/// tau_j = P[X_j > u_j], dependence l_J.
GpParams conditional_excess(const GpParams& h, const ConditionalSpec& spec);

/// Nonnegative combination matrix A (m x d) with the derived mixing weights
/// p_{i,j} = a_{i,j} sigma_j / (A_i sigma).
struct CombinationSpec {
  Matrix coefficients;
};

/// Joint law of A X for a GP vector with a common shape parameter. The
/// survival evaluator P[A X not<= x] averages over a frozen spectral sample;
/// conditional_u is the m-variate generator of law(A X | A X not<= 0) =
/// GPU(A sigma, gamma, law(U)).
struct LinearCombination {
  std::function<McEstimate(std::span<const double>)> survival;
  GeneratorLaw conditional_u;
  Vec scale;            // A sigma
  double common_gamma;  // the shared shape
};
LinearCombination linear_combination(const GpParams& h, const SpectralLaw& s,
                                     const CombinationSpec& spec, std::size_t n_mc,
                                     std::uint64_t seed);

}  // namespace mgpd

#endif  // MGPD_ANALYSIS_HPP
