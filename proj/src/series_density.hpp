#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "quadrature.hpp"

namespace gtours {

// Truncation controls for the three-step Bessel-series density at
// step-correlation rho.  The density is defined for -1/sqrt(2) < rho < 0;
// the physical open three-step planar tour sits at the boundary rho = -1/2
// and is reached only by extrapolation.
struct SeriesParams {
  double rho = -0.45;
  int k_max = 80;
  double term_tol = 1e-10;
};

void validate(const SeriesParams& params);

// The parameterized covariance data of the three complex (planar) steps:
// psi is the covariance matrix Psi(rho) of one coordinate pair scaled so
// that diag(psi) = 4, phi its inverse, delta = det(phi) = 1/(64(1-2 rho^2)).
struct ComplexCovariance {
  std::array<std::array<double, 3>, 3> psi;
  std::array<std::array<double, 3>, 3> phi;
  double delta;
};

// Fills out with Psi(rho) = 4 * [[1, rho, 0], [rho, 1, rho], [0, rho, 1]].
// Defined for every rho; positive semidefinite exactly when
// -1/sqrt(2) <= rho <= 1/sqrt(2).
void psi_matrix(double rho, std::array<std::array<double, 3>, 3>& out);

// Psi, its explicit inverse Phi(rho) = (1/(4(1-2 rho^2))) *
// [[1-rho^2, -rho, rho^2], [-rho, 1, -rho], [rho^2, -rho, 1-rho^2]],
// and delta.  Requires |rho| < 1/sqrt(2) (Phi blows up at the boundary).
ComplexCovariance step_covariance(double rho);

// Joint density of the three step lengths (a, b, c) at correlation rho:
//   f = 8 delta a b c exp(-phi11 a^2 - phi22 b^2 - phi33 c^2)
//       * sum_k eps_k (-1)^k I_k(2ab phi12) I_k(2bc phi23) I_k(2ac phi13)
// with eps_0 = 1 and eps_k = 2, evaluated with exponentially scaled Bessel
// values so the growing I_k factors and the Gaussian exponent combine
// analytically.  Summation stops once three consecutive terms fall below
// term_tol times the running partial sum (or below the double-precision
// noise floor of the largest term); five consecutive growing terms raise a
// divergence error, as does reaching k_max without meeting the criterion.
double joint_density_3step(double a, double b, double c,
                           const SeriesParams& params);

// F(rho): the expected product of the three step lengths under the density
// above, i.e. the triple integral of a b c f(a, b, c) over the truncated
// positive octant.  The open three-step planar tour value is the limit of
// F as rho decreases to -1/2.
IntegralResult mu23_at_rho(const SeriesParams& params,
                           const QuadratureConfig& cfg);

struct Extrapolation {
  double value = 0.0;
  double uncertainty = 0.0;
  bool infinite_uncertainty = false;
  // F at each grid point, with the quadrature error estimates.
  std::vector<double> f_values;
  std::vector<double> f_errors;
  // Least-squares value at the limit for each fitted degree 1..D.
  std::vector<double> degree_values;
  std::uint64_t evaluations = 0;
};

// Least-squares polynomial extrapolation of the samples (u_i, f_i) to u = 0.
// Degrees 1..min(max_degree, points-1) are fitted; the returned value is the
// highest-degree fit at 0 and the uncertainty is the difference between the
// last two degrees (the degree-0 fit, the plain mean, serves as the
// predecessor when only degree 1 is available).  A single point returns that
// point with the infinite-uncertainty flag set.  Throws fit_error when the
// abscissae are too clustered to support the requested degree.
Extrapolation extrapolate_to_zero(std::span<const double> u,
                                  std::span<const double> f, int max_degree);

// Evaluates F over rho_grid (strictly decreasing, inside (-1/2, 0)) and
// extrapolates in the variable u = rho + 1/2 to the physical limit u = 0.
Extrapolation mu23_extrapolated(std::span<const double> rho_grid,
                                const SeriesParams& base,
                                const QuadratureConfig& cfg,
                                int max_degree = 3);

}  // namespace gtours
