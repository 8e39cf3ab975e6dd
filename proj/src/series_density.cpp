#include "series_density.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"
#include "special_functions.hpp"

namespace gtours {

namespace {

constexpr double kRhoLowerBound = -0.70710678118654752440;  // -1/sqrt(2)

}  // namespace

void validate(const SeriesParams& params) {
  if (!(params.rho > kRhoLowerBound && params.rho < 0.0)) {
    throw domain_error("SeriesParams: rho must lie in (-1/sqrt(2), 0), got " +
                       std::to_string(params.rho));
  }
  if (params.k_max < 0) {
    throw domain_error("SeriesParams: k_max must be >= 0");
  }
  if (!(params.term_tol > 0.0)) {
    throw domain_error("SeriesParams: term_tol must be positive");
  }
}

void psi_matrix(double rho, std::array<std::array<double, 3>, 3>& out) {
  out = {{{4.0, 4.0 * rho, 0.0},
          {4.0 * rho, 4.0, 4.0 * rho},
          {0.0, 4.0 * rho, 4.0}}};
}

ComplexCovariance step_covariance(double rho) {
  if (!(std::abs(rho) < -kRhoLowerBound)) {
    throw domain_error(
        "step_covariance: |rho| must be below 1/sqrt(2) for invertibility, got " +
        std::to_string(rho));
  }
  ComplexCovariance cov;
  psi_matrix(rho, cov.psi);
  const double denom = 4.0 * (1.0 - 2.0 * rho * rho);
  cov.phi = {{{(1.0 - rho * rho) / denom, -rho / denom, rho * rho / denom},
              {-rho / denom, 1.0 / denom, -rho / denom},
              {rho * rho / denom, -rho / denom, (1.0 - rho * rho) / denom}}};
  cov.delta = 1.0 / (64.0 * (1.0 - 2.0 * rho * rho));
  return cov;
}

namespace {

// Core series evaluation shared by the public density call and the cached
// integration path.  alpha_cached, when non-null, holds the scaled Bessel
// array for the (a,b)-dependent argument, which is constant along the
// innermost integration direction.
double density_series(const ComplexCovariance& cov, const SeriesParams& params,
                      double a, double b, double c,
                      const double* alpha_cached, std::vector<double>& buf_alpha,
                      std::vector<double>& buf_beta,
                      std::vector<double>& buf_gamma) {
  if (a < 0.0 || b < 0.0 || c < 0.0) {
    throw domain_error("joint_density_3step: lengths must be >= 0");
  }
  if (a == 0.0 || b == 0.0 || c == 0.0) {
    return 0.0;
  }
  const double phi11 = cov.phi[0][0];
  const double phi22 = cov.phi[1][1];
  const double phi33 = cov.phi[2][2];
  const double phi12 = cov.phi[0][1];
  const double phi23 = cov.phi[1][2];
  const double phi13 = cov.phi[0][2];
  const double alpha = 2.0 * a * b * std::abs(phi12);
  const double beta = 2.0 * b * c * std::abs(phi23);
  const double gamma = 2.0 * a * c * std::abs(phi13);

  const std::size_t orders = static_cast<std::size_t>(params.k_max) + 1;
  const double* alpha_values = alpha_cached;
  if (alpha_values == nullptr) {
    buf_alpha.resize(orders);
    bessel_i_scaled_all(alpha, buf_alpha);
    alpha_values = buf_alpha.data();
  }
  buf_beta.resize(orders);
  buf_gamma.resize(orders);
  bessel_i_scaled_all(beta, buf_beta);
  bessel_i_scaled_all(gamma, buf_gamma);

  // The scaled sum multiplies exp(alpha + beta + gamma) back in through the
  // combined exponent below, which is a negative semidefinite quadratic in
  // (a, b, c); nothing here can overflow.
  double sum = 0.0;
  double max_term = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  int small_streak = 0;
  int growth_streak = 0;
  bool converged = false;
  for (int k = 0; k <= params.k_max; ++k) {
    const std::size_t ku = static_cast<std::size_t>(k);
    const double eps_k = (k == 0) ? 1.0 : 2.0;
    const double magnitude =
        eps_k * alpha_values[ku] * buf_beta[ku] * buf_gamma[ku];
    sum += (k % 2 == 0) ? magnitude : -magnitude;
    max_term = std::max(max_term, magnitude);
    if (magnitude > previous) {
      if (++growth_streak >= 5) {
        throw convergence_error(
            "joint_density_3step: series terms grew for 5 consecutive orders "
            "(rho too close to the singular boundary for this k_max)");
      }
    } else {
      growth_streak = 0;
    }
    previous = magnitude;
    const double noise_floor =
        std::numeric_limits<double>::epsilon() * max_term;
    if (magnitude <= std::max(params.term_tol * std::abs(sum), noise_floor)) {
      if (++small_streak >= 3) {
        converged = true;
        break;
      }
    } else {
      small_streak = 0;
    }
  }
  if (!converged) {
    throw convergence_error(
        "joint_density_3step: series did not meet term_tol within k_max = " +
        std::to_string(params.k_max) + " orders");
  }
  const double exponent = -phi11 * a * a - phi22 * b * b - phi33 * c * c +
                          alpha + beta + gamma;
  return 8.0 * cov.delta * a * b * c * std::exp(exponent) * sum;
}

}  // namespace

double joint_density_3step(double a, double b, double c,
                           const SeriesParams& params) {
  validate(params);
  const ComplexCovariance cov = step_covariance(params.rho);
  std::vector<double> buf_alpha;
  std::vector<double> buf_beta;
  std::vector<double> buf_gamma;
  return density_series(cov, params, a, b, c, nullptr, buf_alpha, buf_beta,
                        buf_gamma);
}

IntegralResult mu23_at_rho(const SeriesParams& params,
                           const QuadratureConfig& cfg) {
  validate(params);
  validate(cfg);
  const ComplexCovariance cov = step_covariance(params.rho);
  const double R = cfg.truncation_radius;
  const double abs_p12 = std::abs(cov.phi[0][1]);
  const std::size_t orders = static_cast<std::size_t>(params.k_max) + 1;

  std::vector<double> alpha_cache(orders);
  std::vector<double> buf_alpha;
  std::vector<double> buf_beta;
  std::vector<double> buf_gamma;
  std::uint64_t extra_evals = 0;
  double level_budget = 0.0;

  auto outer_integrand = [&](double a) {
    auto middle_integrand = [&](double b) {
      bessel_i_scaled_all(2.0 * a * b * abs_p12, alpha_cache);
      auto inner_integrand = [&](double c) {
        return a * b * c *
               density_series(cov, params, a, b, c, alpha_cache.data(),
                              buf_alpha, buf_beta, buf_gamma);
      };
      const IntegralResult r =
          integrate_1d(inner_integrand, 0.0, R, 0.1 * cfg.tol,
                       cfg.tol * 1e-5, cfg.max_subdivisions);
      extra_evals += r.evaluations;
      return r.value;
    };
    const IntegralResult r =
        integrate_1d(middle_integrand, 0.0, R, 0.25 * cfg.tol, cfg.tol * 1e-4,
                     cfg.max_subdivisions);
    extra_evals += r.evaluations;
    level_budget = std::max(level_budget, r.error);
    return r.value;
  };
  IntegralResult outer = integrate_1d(outer_integrand, 0.0, R, cfg.tol,
                                      cfg.tol * 1e-4, cfg.max_subdivisions);
  IntegralResult result;
  result.value = outer.value;
  result.error = outer.error + R * level_budget;
  result.evaluations = outer.evaluations + extra_evals;
  return result;
}

Extrapolation extrapolate_to_zero(std::span<const double> u,
                                  std::span<const double> f, int max_degree) {
  const std::size_t m = u.size();
  if (m == 0 || f.size() != m) {
    throw domain_error("extrapolate_to_zero: need matching non-empty samples");
  }
  if (max_degree < 1) {
    throw domain_error("extrapolate_to_zero: max_degree must be >= 1");
  }
  Extrapolation result;
  result.f_values.assign(f.begin(), f.end());
  result.f_errors.assign(m, 0.0);
  if (m == 1) {
    result.value = f[0];
    result.uncertainty = std::numeric_limits<double>::infinity();
    result.infinite_uncertainty = true;
    return result;
  }
  const int top_degree = std::min<int>(max_degree, static_cast<int>(m) - 1);

  double mean = 0.0;
  for (double v : f) {
    mean += v;
  }
  mean /= static_cast<double>(m);

  double previous = mean;  // degree-0 fit
  double current = mean;
  for (int degree = 1; degree <= top_degree; ++degree) {
    const int cols = degree + 1;
    // Normal equations for the monomial basis, with columns scaled to unit
    // max magnitude so clustered grids are detected rather than silently
    // producing garbage.
    std::vector<double> scale(cols, 0.0);
    for (int j = 0; j < cols; ++j) {
      for (std::size_t i = 0; i < m; ++i) {
        scale[j] = std::max(scale[j], std::abs(std::pow(u[i], j)));
      }
      if (scale[j] == 0.0) {
        throw fit_error("extrapolate_to_zero: degenerate abscissae");
      }
    }
    std::vector<double> ata(static_cast<std::size_t>(cols) * cols, 0.0);
    std::vector<double> atf(cols, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (int r = 0; r < cols; ++r) {
        const double xr = std::pow(u[i], r) / scale[r];
        atf[static_cast<std::size_t>(r)] += xr * f[i];
        for (int cidx = 0; cidx < cols; ++cidx) {
          ata[static_cast<std::size_t>(r) * cols + cidx] +=
              xr * std::pow(u[i], cidx) / scale[cidx];
        }
      }
    }
    // Gaussian elimination with partial pivoting on the scaled system.
    for (int col = 0; col < cols; ++col) {
      int pivot = col;
      for (int row = col + 1; row < cols; ++row) {
        if (std::abs(ata[static_cast<std::size_t>(row) * cols + col]) >
            std::abs(ata[static_cast<std::size_t>(pivot) * cols + col])) {
          pivot = row;
        }
      }
      const double head = ata[static_cast<std::size_t>(pivot) * cols + col];
      if (std::abs(head) < 1e-12) {
        throw fit_error(
            "extrapolate_to_zero: grid too clustered for degree " +
            std::to_string(degree) + " (near-singular normal equations)");
      }
      if (pivot != col) {
        for (int j = 0; j < cols; ++j) {
          std::swap(ata[static_cast<std::size_t>(pivot) * cols + j],
                    ata[static_cast<std::size_t>(col) * cols + j]);
        }
        std::swap(atf[static_cast<std::size_t>(pivot)],
                  atf[static_cast<std::size_t>(col)]);
      }
      for (int row = col + 1; row < cols; ++row) {
        const double factor =
            ata[static_cast<std::size_t>(row) * cols + col] /
            ata[static_cast<std::size_t>(col) * cols + col];
        for (int j = col; j < cols; ++j) {
          ata[static_cast<std::size_t>(row) * cols + j] -=
              factor * ata[static_cast<std::size_t>(col) * cols + j];
        }
        atf[static_cast<std::size_t>(row)] -=
            factor * atf[static_cast<std::size_t>(col)];
      }
    }
    std::vector<double> coeff(cols, 0.0);
    for (int row = cols - 1; row >= 0; --row) {
      double rhs = atf[static_cast<std::size_t>(row)];
      for (int j = row + 1; j < cols; ++j) {
        rhs -= ata[static_cast<std::size_t>(row) * cols + j] *
               coeff[static_cast<std::size_t>(j)];
      }
      coeff[static_cast<std::size_t>(row)] =
          rhs / ata[static_cast<std::size_t>(row) * cols + row];
    }
    // Value at u = 0 is the constant coefficient, un-scaled.
    previous = current;
    current = coeff[0] / scale[0];
    result.degree_values.push_back(current);
  }
  result.value = current;
  result.uncertainty = std::abs(current - previous);
  return result;
}

Extrapolation mu23_extrapolated(std::span<const double> rho_grid,
                                const SeriesParams& base,
                                const QuadratureConfig& cfg, int max_degree) {
  if (rho_grid.empty()) {
    throw domain_error("mu23_extrapolated: empty rho grid");
  }
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] > -0.5 && rho_grid[i] < 0.0)) {
      throw domain_error(
          "mu23_extrapolated: grid values must lie in (-1/2, 0), got " +
          std::to_string(rho_grid[i]));
    }
    if (i > 0 && !(rho_grid[i] < rho_grid[i - 1])) {
      throw domain_error(
          "mu23_extrapolated: grid must decrease strictly toward -1/2");
    }
  }
  std::vector<double> u(rho_grid.size());
  std::vector<double> f(rho_grid.size());
  std::vector<double> errors(rho_grid.size());
  std::uint64_t evaluations = 0;
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    SeriesParams params = base;
    params.rho = rho_grid[i];
    const IntegralResult r = mu23_at_rho(params, cfg);
    u[i] = rho_grid[i] + 0.5;
    f[i] = r.value;
    errors[i] = r.error;
    evaluations += r.evaluations;
  }
  Extrapolation result = extrapolate_to_zero(u, f, max_degree);
  result.f_errors = errors;
  result.evaluations = evaluations;
  return result;
}

}  // namespace gtours
