#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"
#include "series_density.hpp"

using namespace gtours;

namespace {

using Matrix3 = std::array<std::array<double, 3>, 3>;

Matrix3 multiply(const Matrix3& a, const Matrix3& b) {
  Matrix3 out{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t k = 0; k < 3; ++k) {
        out[i][j] += a[i][k] * b[k][j];
      }
    }
  }
  return out;
}

double det3(const Matrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Total mass of the three-length density by direct nested quadrature,
// independent of the moment integrator under test.
double density_mass(double rho) {
  SeriesParams params;
  params.rho = rho;
  const double radius = 10.0;
  const auto outer = integrate_1d(
      [&](double a) {
        return integrate_1d(
                   [&](double b) {
                     return integrate_1d(
                                [&](double c) {
                                  return joint_density_3step(a, b, c, params);
                                },
                                0.0, radius, 1e-6, 1e-10, 200)
                         .value;
                   },
                   0.0, radius, 1e-6, 1e-10, 200)
            .value;
      },
      0.0, radius, 1e-5, 1e-9, 200);
  return outer.value;
}

}  // namespace

TEST_CASE("step covariance matrix and its inverse") {
  Matrix3 psi;
  psi_matrix(-0.5, psi);
  const Matrix3 expected{{{4.0, -2.0, 0.0}, {-2.0, 4.0, -2.0}, {0.0, -2.0, 4.0}}};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(psi[i][j] == expected[i][j]);
    }
  }

  for (double rho : {-0.2, -0.35, -0.45, -0.5}) {
    CAPTURE(rho);
    const ComplexCovariance cov = step_covariance(rho);
    const double scale = 1.0 / (4.0 * (1.0 - 2.0 * rho * rho));
    const Matrix3 phi_expected{
        {{(1.0 - rho * rho) * scale, -rho * scale, rho * rho * scale},
         {-rho * scale, scale, -rho * scale},
         {rho * rho * scale, -rho * scale, (1.0 - rho * rho) * scale}}};
    const Matrix3 product = multiply(cov.psi, cov.phi);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK(std::fabs(cov.phi[i][j] - phi_expected[i][j]) < 1e-14);
        CHECK(std::fabs(product[i][j] - (i == j ? 1.0 : 0.0)) < 1e-12);
      }
    }
    CHECK(cov.delta ==
          doctest::Approx(1.0 / (64.0 * (1.0 - 2.0 * rho * rho)))
              .epsilon(1e-14));
    CHECK(det3(cov.phi) == doctest::Approx(cov.delta).epsilon(1e-12));
  }

  CHECK_THROWS_AS(step_covariance(std::sqrt(0.5)), domain_error);
  CHECK_THROWS_AS(step_covariance(-0.7072), domain_error);
  CHECK_THROWS_AS(step_covariance(0.8), domain_error);
}

TEST_CASE("series parameter validation") {
  SeriesParams params;
  CHECK_NOTHROW(validate(params));
  params.rho = 0.0;
  CHECK_THROWS_AS(validate(params), domain_error);
  params.rho = -0.75;
  CHECK_THROWS_AS(validate(params), domain_error);
  params = SeriesParams{};
  params.k_max = -1;
  CHECK_THROWS_AS(validate(params), domain_error);
  params = SeriesParams{};
  params.term_tol = 0.0;
  CHECK_THROWS_AS(validate(params), domain_error);
}

TEST_CASE("joint density basics") {
  SeriesParams params;
  params.rho = -0.35;
  CHECK(joint_density_3step(0.0, 1.0, 1.0, params) == 0.0);
  CHECK(joint_density_3step(1.0, 0.0, 1.0, params) == 0.0);
  CHECK(joint_density_3step(1.0, 1.0, 0.0, params) == 0.0);
  CHECK_THROWS_AS(joint_density_3step(-1.0, 1.0, 1.0, params), domain_error);

  // Reversing the tour swaps the outer steps but leaves the law unchanged.
  for (double a : {0.5, 1.0, 2.5}) {
    for (double b : {0.7, 1.8}) {
      for (double c : {0.4, 1.3, 3.0}) {
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(c);
        const double fwd = joint_density_3step(a, b, c, params);
        const double rev = joint_density_3step(c, b, a, params);
        CHECK(fwd > 0.0);
        CHECK(fwd == doctest::Approx(rev).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("joint density integrates to one") {
  for (double rho : {-0.2, -0.35, -0.45}) {
    CAPTURE(rho);
    CHECK(std::fabs(density_mass(rho) - 1.0) < 1e-4);
  }
}

TEST_CASE("series truncation reporting") {
  SeriesParams starved;
  starved.rho = -0.45;
  starved.k_max = 1;
  CHECK_THROWS_AS(joint_density_3step(2.0, 2.0, 2.0, starved),
                  convergence_error);
}

TEST_CASE("F on the extrapolation grid") {
  QuadratureConfig cfg;
  cfg.tol = 1e-7;
  const struct {
    double rho;
    double reference;
  } grid[] = {{-0.40, 6.008940}, {-0.43, 6.076542}, {-0.45, 6.124147},
              {-0.47, 6.173754}, {-0.48, 6.199298}};
  double previous = 0.0;
  for (const auto& point : grid) {
    CAPTURE(point.rho);
    SeriesParams params;
    params.rho = point.rho;
    const auto result = mu23_at_rho(params, cfg);
    CHECK(std::fabs(result.value - point.reference) < 2e-5);
    CHECK(result.value > previous);
    previous = result.value;
  }
}

TEST_CASE("F approaches the independent product as rho vanishes") {
  SeriesParams params;
  params.rho = -0.01;
  QuadratureConfig cfg;
  cfg.tol = 1e-6;
  const double independent = std::pow(std::acos(-1.0), 1.5);
  CHECK(std::fabs(mu23_at_rho(params, cfg).value - independent) < 0.02);
}

TEST_CASE("polynomial extrapolation recovers exact polynomials") {
  const std::vector<double> u{0.10, 0.07, 0.05, 0.03, 0.02};
  std::vector<double> cubic(u.size());
  std::vector<double> linear(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    cubic[i] = 2.0 + 3.0 * u[i] - 4.0 * u[i] * u[i] +
               0.5 * u[i] * u[i] * u[i];
    linear[i] = 1.0 + 2.0 * u[i];
  }

  const Extrapolation from_cubic = extrapolate_to_zero(u, cubic, 3);
  REQUIRE(from_cubic.degree_values.size() == 3);
  CHECK(std::fabs(from_cubic.value - 2.0) < 1e-10);
  CHECK(from_cubic.value == from_cubic.degree_values[2]);
  CHECK(from_cubic.uncertainty ==
        doctest::Approx(std::fabs(from_cubic.degree_values[2] -
                                  from_cubic.degree_values[1]))
            .epsilon(1e-12));
  CHECK(!from_cubic.infinite_uncertainty);

  const Extrapolation from_linear = extrapolate_to_zero(u, linear, 3);
  for (double degree_value : from_linear.degree_values) {
    CHECK(std::fabs(degree_value - 1.0) < 1e-10);
  }
  CHECK(from_linear.uncertainty < 1e-10);
}

TEST_CASE("extrapolation edge cases") {
  const std::vector<double> single_u{0.05};
  const std::vector<double> single_f{6.1};
  const Extrapolation single = extrapolate_to_zero(single_u, single_f, 3);
  CHECK(single.value == 6.1);
  CHECK(single.infinite_uncertainty);

  const std::vector<double> pair_u{0.10, 0.05};
  const std::vector<double> pair_f{6.0, 6.1};
  const Extrapolation pair = extrapolate_to_zero(pair_u, pair_f, 3);
  REQUIRE(pair.degree_values.size() == 1);
  // Only the straight line fits two points; its predecessor for the
  // uncertainty is the plain mean.
  CHECK(pair.value == doctest::Approx(6.2).epsilon(1e-12));
  CHECK(pair.uncertainty == doctest::Approx(6.2 - 6.05).epsilon(1e-10));

  const std::vector<double> clustered_u{0.05 + 5e-14, 0.05};
  const std::vector<double> clustered_f{6.0, 6.0};
  CHECK_THROWS_AS(extrapolate_to_zero(clustered_u, clustered_f, 1), fit_error);

  CHECK_THROWS_AS(extrapolate_to_zero(std::vector<double>{},
                                      std::vector<double>{}, 1),
                  domain_error);
  CHECK_THROWS_AS(extrapolate_to_zero(single_u, single_f, 0), domain_error);
  const std::vector<double> mismatched{0.1, 0.2, 0.3};
  CHECK_THROWS_AS(extrapolate_to_zero(mismatched, single_f, 1), domain_error);
}

TEST_CASE("extrapolated three-step value") {
  const std::vector<double> grid{-0.40, -0.43, -0.45, -0.47, -0.48};
  SeriesParams params;
  QuadratureConfig cfg;
  cfg.tol = 1e-7;
  const Extrapolation result = mu23_extrapolated(grid, params, cfg);
  // Against an independent direct-simulation reference of the open
  // three-step planar tour, 6.25573 +- 0.00534.
  CHECK(std::fabs(result.value - 6.25573) < 3.0 * 0.00534);
  CHECK(result.value > 6.2);
  CHECK(result.value < 6.3);
  CHECK(result.uncertainty < 5e-3);
  CHECK(!result.infinite_uncertainty);
  REQUIRE(result.f_values.size() == grid.size());
  REQUIRE(result.degree_values.size() == 3);
  CHECK(result.evaluations > 0);

  // The recorded grid values are the same integrals F(rho) computes alone.
  SeriesParams check_params;
  check_params.rho = grid[2];
  CHECK(result.f_values[2] == mu23_at_rho(check_params, cfg).value);
}

TEST_CASE("extrapolation grid validation") {
  SeriesParams params;
  QuadratureConfig cfg;
  const std::vector<double> empty;
  CHECK_THROWS_AS(mu23_extrapolated(empty, params, cfg), domain_error);
  const std::vector<double> increasing{-0.45, -0.40};
  CHECK_THROWS_AS(mu23_extrapolated(increasing, params, cfg), domain_error);
  const std::vector<double> outside{-0.40, -0.55};
  CHECK_THROWS_AS(mu23_extrapolated(outside, params, cfg), domain_error);
  const std::vector<double> positive{0.1};
  CHECK_THROWS_AS(mu23_extrapolated(positive, params, cfg), domain_error);
}
