#include "quadrature.hpp"

#include <cmath>
#include <numbers>

#include "special_functions.hpp"

namespace gtours {

void validate(const QuadratureConfig& cfg) {
  if (!(cfg.tol > 0.0)) {
    throw domain_error("QuadratureConfig: tol must be positive");
  }
  if (!(cfg.truncation_radius > 0.0)) {
    throw domain_error("QuadratureConfig: truncation radius must be positive");
  }
  if (cfg.max_subdivisions < 1) {
    throw domain_error("QuadratureConfig: need at least one subdivision");
  }
}

IntegralResult mu22_quadrature(const QuadratureConfig& cfg) {
  validate(cfg);
  const double R = cfg.truncation_radius;
  const double inner_floor = cfg.tol * 1e-4;
  std::uint64_t evaluations = 0;
  std::uint64_t inner_evals = 0;
  double inner_error_budget = 0.0;

  auto outer_integrand = [&](double a) {
    auto inner = [&](double b) {
      const double x = a * b / 3.0;
      return a * a * b * b * std::exp(-(a * a - a * b + b * b) / 3.0) *
             bessel_i_scaled(0, x);
    };
    const IntegralResult r = integrate_1d(inner, 0.0, R, 0.25 * cfg.tol,
                                          inner_floor, cfg.max_subdivisions);
    inner_evals += r.evaluations;
    inner_error_budget = std::max(inner_error_budget, r.error);
    return r.value;
  };
  IntegralResult outer = integrate_1d(outer_integrand, 0.0, R, cfg.tol,
                                      inner_floor, cfg.max_subdivisions);
  evaluations = outer.evaluations + inner_evals;
  IntegralResult result;
  result.value = outer.value / 3.0;
  result.error = (outer.error + R * inner_error_budget) / 3.0;
  result.evaluations = evaluations;
  return result;
}

namespace {

// Shared driver for the two closed three-step tours: integrates
// inner(x, y) over the triangle 0 < y < x < R and applies the prefactor.
template <class Inner>
IntegralResult triangle_integral(const QuadratureConfig& cfg, double prefactor,
                                 Inner&& inner) {
  const double R = cfg.truncation_radius;
  const double mid_floor = cfg.tol * 1e-4;
  std::uint64_t extra_evals = 0;
  double mid_error_budget = 0.0;

  auto outer_integrand = [&](double x) {
    auto y_integrand = [&](double y) {
      const IntegralResult r = inner(x, y, &extra_evals);
      return r.value;
    };
    const IntegralResult r = integrate_1d(y_integrand, 0.0, x, 0.25 * cfg.tol,
                                          mid_floor, cfg.max_subdivisions);
    extra_evals += r.evaluations;
    mid_error_budget = std::max(mid_error_budget, r.error);
    return r.value;
  };
  IntegralResult outer = integrate_1d(outer_integrand, 0.0, R, cfg.tol,
                                      mid_floor, cfg.max_subdivisions);
  IntegralResult result;
  result.value = prefactor * outer.value;
  result.error = prefactor * (outer.error + R * mid_error_budget);
  result.evaluations = outer.evaluations + extra_evals;
  return result;
}

}  // namespace

IntegralResult nu23_quadrature(const QuadratureConfig& cfg) {
  validate(cfg);
  const double inner_floor = cfg.tol * 1e-5;
  auto inner = [&cfg, inner_floor](double x, double y, std::uint64_t* evals) {
    auto t_integrand = [x, y](double t) {
      const double cos_t = std::cos(t);
      const double z = x - y * cos_t;
      const double rest =
          (2.0 * x + y * (1.0 - cos_t)) * (2.0 * x - y * (1.0 + cos_t));
      if (rest <= 0.0) {
        return 0.0;
      }
      return x * x * y * y * z * z / std::sqrt(rest) *
             std::exp(-(x * x + y * y + z * z) / 6.0);
    };
    const IntegralResult r =
        integrate_1d(t_integrand, 0.0, std::numbers::pi, 0.1 * cfg.tol,
                     inner_floor, cfg.max_subdivisions);
    *evals += r.evaluations;
    return r;
  };
  return triangle_integral(cfg, 4.0 / (3.0 * std::numbers::pi), inner);
}

IntegralResult nu33_quadrature(const QuadratureConfig& cfg) {
  validate(cfg);
  const double inner_floor = cfg.tol * 1e-5;
  auto inner = [&cfg, inner_floor](double x, double y, std::uint64_t* evals) {
    auto z_integrand = [](double z) { return z * z * std::exp(-z * z / 6.0); };
    const IntegralResult r =
        integrate_1d(z_integrand, x - y, x + y, 0.1 * cfg.tol, inner_floor,
                     cfg.max_subdivisions);
    *evals += r.evaluations;
    IntegralResult scaled = r;
    const double weight = x * x * y * y * std::exp(-(x * x + y * y) / 6.0);
    scaled.value *= weight;
    scaled.error *= weight;
    return scaled;
  };
  return triangle_integral(cfg, 2.0 * std::sqrt(3.0) / (9.0 * std::numbers::pi),
                           inner);
}

}  // namespace gtours
