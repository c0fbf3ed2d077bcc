#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"

using namespace mgpd;
using mgpd_test::rel_diff;
using mgpd_test::std_normal_cdf;
using mgpd_test::std_normal_pdf;

namespace {

DensityFn gaussian_iid(std::size_t d) {
  return [d](std::span<const double> t) {
    double v = 1.0;
    for (std::size_t j = 0; j < d; ++j) v *= std_normal_pdf(t[j]);
    return v;
  };
}

}  // namespace

TEST_CASE("density_std_t vanishes on the negative orthant") {
  CHECK(density_std_t(gaussian_iid(2), Vec{-0.5, -0.1}) == 0.0);
  CHECK(density_std_t(gaussian_iid(2), Vec{0.0, 0.0}) == 0.0);
  CHECK(density_std_t(gaussian_iid(1), Vec{-1e-12}) == 0.0);
}

TEST_CASE("density_std_t, one dimension: any density integrates out to e^{-z}") {
  for (double z : {0.1, 0.5, 1.0, 2.5, 6.0}) {
    const double h = density_std_t(gaussian_iid(1), Vec{z});
    CHECK(rel_diff(h, std::exp(-z)) <= 1e-8);
  }
}

TEST_CASE("density_std_t, two iid Gaussian coordinates: convolution closed form") {
  // int phi(z1+r) phi(z2+r) dr = phi((z1-z2)/sqrt(2)) / sqrt(2).
  for (const Vec& z : {Vec{0.5, 0.2}, Vec{1.0, -0.7}, Vec{2.0, 2.0}, Vec{0.1, -3.0}}) {
    const double h = density_std_t(gaussian_iid(2), z);
    const double expected =
        std::exp(-std::max(z[0], z[1])) * std_normal_pdf((z[0] - z[1]) / std::sqrt(2.0)) /
        std::sqrt(2.0);
    CHECK(rel_diff(h, expected) <= 1e-8);
  }
}

TEST_CASE("density_std_u, one Gaussian coordinate: exponential tilting closed form") {
  // int e^s phi(z+s) ds = e^{1/2} e^{-z} and norm = E[e^U] = e^{1/2}.
  const double norm = std::exp(0.5);
  for (double z : {0.2, 1.0, 3.0}) {
    const double h = density_std_u(gaussian_iid(1), norm, Vec{z});
    CHECK(rel_diff(h, std::exp(-z)) <= 1e-8);
  }
  CHECK(density_std_u(gaussian_iid(1), norm, Vec{-0.3}) == 0.0);
  CHECK_THROWS_AS((void)density_std_u(gaussian_iid(1), 0.0, Vec{1.0}), std::invalid_argument);
}

TEST_CASE("density_r, one exponential coordinate: the standard Pareto density") {
  const DensityFn f_r = [](std::span<const double> t) {
    return t[0] >= 0.0 ? std::exp(-t[0]) : 0.0;
  };
  // gamma = sigma = 1, R ~ Exp(1): h(x) = (x+1)^{-2}, norm = E[R] = 1.
  for (double x : {0.3, 1.0, 4.0}) {
    const double h = density_r(f_r, Vec{1.0}, Vec{1.0}, 1.0, Vec{x});
    CHECK(rel_diff(h, std::pow(1.0 + x, -2.0)) <= 1e-8);
  }
  CHECK(density_r(f_r, Vec{1.0}, Vec{1.0}, 1.0, Vec{-0.5}) == 0.0);
  CHECK_THROWS_AS((void)density_r(f_r, Vec{1.0}, Vec{1.0}, 1.0, Vec{-1.5}), std::domain_error);
}

TEST_CASE("density_r equals the image of density_std_u under the change of variables") {
  const Vec sigma{1.0, 2.0};
  const Vec gamma{1.0, 0.5};
  const DensityFn f_r = [](std::span<const double> t) {
    if (t[0] < 0.0 || t[1] < 0.0) return 0.0;
    return std::exp(-t[0] - t[1]);
  };
  // Image density of U = log(gamma R / sigma)/gamma.
  const DensityFn f_u = [&](std::span<const double> u) {
    Vec r(2);
    double jac = 1.0;
    for (int j = 0; j < 2; ++j) {
      r[j] = sigma[j] / gamma[j] * std::exp(gamma[j] * u[j]);
      jac *= sigma[j] * std::exp(gamma[j] * u[j]);
    }
    return f_r(r) * jac;
  };
  // The two routes share one normalizing constant; its value cancels in the
  // comparison, so any positive number works.
  const double norm = 0.7310586;
  const DensityFn h_z = [&](std::span<const double> z) {
    return density_std_u(f_u, norm, z);
  };
  RngStream rng(99);
  int checked = 0;
  while (checked < 20) {
    Vec x{-0.8 + 4.0 * rng.uniform(), -3.0 + 8.0 * rng.uniform()};
    if (x[0] <= 0.0 && x[1] <= 0.0) continue;
    if (!(sigma[1] + gamma[1] * x[1] > 0.0)) continue;
    const double via_r = density_r(f_r, sigma, gamma, norm, x);
    const double via_u = density_general(sigma, gamma, h_z, x);
    if (via_r == 0.0 && via_u == 0.0) continue;
    CHECK(rel_diff(via_r, via_u) <= 1e-6);
    ++checked;
  }
}

TEST_CASE("density_std_s: uniform mass on two unit faces") {
  const DensityFn f_s = [](std::span<const double> s) {
    const double m = std::min(s[0], s[1]);
    return (m >= -1.0 && m <= 0.0) ? 0.5 : 0.0;
  };
  CHECK(density_std_s(f_s, Vec{1.0, 0.5}) == doctest::Approx(0.5 * std::exp(-1.0)));
  CHECK(density_std_s(f_s, Vec{-0.5, -0.5}) == 0.0);
  CHECK(density_std_s(f_s, Vec{2.0, 0.2}) == 0.0);  // face point below -1

  // Mass check: the law lives on {z: 0 < max z, max z - min z <= 1}.
  DensityModel dm;
  dm.kind = DensityModel::Kind::S;
  dm.dim = 2;
  dm.f = f_s;
  const Vec lo{-1.5, -1.5};
  const Vec hi{14.0, 14.0};
  const auto report = check_density(dm, lo, hi, 2.0 * std::exp(-13.0), 1e-3);
  CHECK(report.pass);
  CHECK(report.empirical == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("gaussian-U model integrates to one") {
  // norm = E[e^{max(U1,U2)}] = 2 e^{1/2} Phi(1/sqrt(2)) for iid standard
  // normal coordinates.
  const double norm = 2.0 * std::exp(0.5) * std_normal_cdf(1.0 / std::sqrt(2.0));
  DensityModel dm;
  dm.kind = DensityModel::Kind::U;
  dm.dim = 2;
  dm.f = gaussian_iid(2);
  dm.norm = norm;
  const Vec lo{-14.0, -14.0};
  const Vec hi{14.0, 14.0};
  const auto report = check_density(dm, lo, hi, 1e-4, 1e-3);
  CHECK(report.pass);
  CHECK(report.empirical == doctest::Approx(1.0).epsilon(2e-3));

  // The Monte Carlo estimate of the same constant agrees.
  const auto u_law = GeneratorLaw::u_law(2, [](RngStream& rng, std::span<double> out) {
    out[0] = rng.normal();
    out[1] = rng.normal();
  });
  const McEstimate est = estimate_norm_u(u_law, 400000, 17);
  CHECK(std::abs(est.value - norm) <= 4.0 * est.se);
}

TEST_CASE("density_general") {
  // Identity wrapper at sigma = 1, gamma = 0.
  const DensityFn h_z = [](std::span<const double> z) {
    return z[0] > 0.0 ? std::exp(-z[0]) : 0.0;
  };
  CHECK(density_general(Vec{1.0}, Vec{0.0}, h_z, Vec{0.7}) ==
        doctest::Approx(std::exp(-0.7)).epsilon(1e-12));

  // sigma = 2, gamma = 0.5: h_X(x) = (1 + x/4)^{-3} / 2.
  const double x = 1.3;
  const double expected = 0.5 * std::pow(1.0 + x / 4.0, -3.0);
  CHECK(density_general(Vec{2.0}, Vec{0.5}, h_z, Vec{x}) ==
        doctest::Approx(expected).epsilon(1e-10));

  // Finite-difference oracle against the univariate cdf.
  const GpParams h(Vec{2.0}, Vec{0.5}, Vec{1.0}, StdfModel::independence(1));
  const double delta = 1e-5;
  const double fd = (gp_cdf(h, Vec{x + delta}) - gp_cdf(h, Vec{x - delta})) / (2.0 * delta);
  CHECK(rel_diff(density_general(Vec{2.0}, Vec{0.5}, h_z, Vec{x}), fd) <= 1e-4);

  CHECK_THROWS_AS((void)density_general(Vec{2.0}, Vec{0.5}, h_z, Vec{-4.5}),
                  std::domain_error);
}

TEST_CASE("T-model mass and cdf consistency through a finite difference") {
  DensityModel dm;
  dm.kind = DensityModel::Kind::T;
  dm.dim = 2;
  dm.f = gaussian_iid(2);
  const Vec lo{-14.0, -14.0};
  const Vec hi{14.0, 14.0};
  const auto report = check_density(dm, lo, hi, 1e-4, 1e-3);
  CHECK(report.pass);

  // Mixed finite difference of the Monte Carlo cdf at an interior point
  // against the quadrature density.
  const auto t_law = GeneratorLaw::t_law(2, [](RngStream& rng, std::span<double> out) {
    out[0] = rng.normal();
    out[1] = rng.normal();
  });
  const Vec z{0.8, 0.4};
  const double dlt = 0.15;
  const std::size_t n = 2000000;
  auto hat = [&](double a, double b) { return cdf_t(t_law, Vec{a, b}, n, 515).value; };
  const double mixed = (hat(z[0] + dlt, z[1] + dlt) - hat(z[0] - dlt, z[1] + dlt) -
                        hat(z[0] + dlt, z[1] - dlt) + hat(z[0] - dlt, z[1] - dlt)) /
                       (4.0 * dlt * dlt);
  CHECK(rel_diff(mixed, dm(z)) <= 0.05);
}

TEST_CASE("quadrature reports non-convergence with the achieved estimate") {
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-15;
  cfg.abs_tol = 1e-300;
  cfg.max_subdivisions = 1;
  const ScalarFn nasty = [](double r) {
    return std::abs(std::sin(157.0 * r)) * std::exp(-std::abs(r) / 20.0);
  };
  CHECK_THROWS_AS((void)integrate_real_line(nasty, cfg), QuadratureError);
  try {
    (void)integrate_real_line(nasty, cfg);
  } catch (const QuadratureError& e) {
    CHECK(e.achieved_error > 0.0);
  }
}
