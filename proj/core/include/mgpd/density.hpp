#ifndef MGPD_DENSITY_HPP
#define MGPD_DENSITY_HPP

#include <cstdint>
#include <functional>
#include <span>

#include "mgpd/common.hpp"
#include "mgpd/quadrature.hpp"
#include "mgpd/spectral.hpp"

namespace mgpd {

/// Joint density on R^d (or on the face {max s = 0} for the spectral kind).
using DensityFn = std::function<double(std::span<const double>)>;

/// Density of the standardized law built from a T-kind generator with joint
/// density f_T supported in R^d:
///   h(z) = 1{z not<= 0} e^{-max z} int_R f_T(z + r) dr.
double density_std_t(const DensityFn& f_t, std::span<const double> z,
                     const QuadratureConfig& cfg = {});

/// Density of the standardized law built from a U-kind generator, with
/// norm = E[exp(max U)]:
///   h(z) = 1{z not<= 0} norm^{-1} int_R e^s f_U(z + s) ds.
double density_std_u(const DensityFn& f_u, double norm, std::span<const double> z,
                     const QuadratureConfig& cfg = {});

/// Density on the observation scale of the R-kind law (gamma > 0), with
/// norm = E[max_j (gamma_j R_j / sigma_j)^{1/gamma_j}]:
///   h(x) = 1{x not<= 0} norm^{-1} int_0^inf f_R(t^gamma (x + sigma/gamma)) t^{sum gamma} dt.
double density_r(const DensityFn& f_r, std::span<const double> sigma,
                 std::span<const double> gamma, double norm, std::span<const double> x,
                 const QuadratureConfig& cfg = {});

/// Density of Z = S + E from a spectral face density; closed form:
///   h(z) = 1{z not<= 0} f_S(z - max z) e^{-max z}.
double density_std_s(const DensityFn& f_s, std::span<const double> z);

/// Change of variables from the standardized density h_Z to the observation
/// scale: h_X(x) = h_Z(log(1 + gamma x / sigma)/gamma) prod_j (sigma_j + gamma_j x_j)^{-1}.
double density_general(std::span<const double> sigma, std::span<const double> gamma,
                       const DensityFn& std_density, std::span<const double> x);

/// Monte Carlo estimates of the normalizing constants, with standard errors
/// recorded so downstream tolerances can widen.
McEstimate estimate_norm_u(const GeneratorLaw& g, std::size_t n_mc, std::uint64_t seed);
McEstimate estimate_norm_r(const GeneratorLaw& g, std::size_t n_mc, std::uint64_t seed);

/// An evaluable density handle: one of the four construction kinds plus its
/// quadrature configuration and normalizing constant.
struct DensityModel {
  enum class Kind { T, U, R, S };

  Kind kind;
  std::size_t dim;
  DensityFn f;
  double norm = 1.0;     // U and R kinds
  double norm_se = 0.0;  // nonzero when norm was Monte Carlo estimated
  Vec sigma;             // R kind
  Vec gamma;             // R kind
  QuadratureConfig quadrature;

  double operator()(std::span<const double> z) const;
};

}  // namespace mgpd

#endif  // MGPD_DENSITY_HPP
