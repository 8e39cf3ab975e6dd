#include "gtours/gtours.h"

#include <cstring>
#include <exception>
#include <span>
#include <string>
#include <vector>

#include "closed_forms.hpp"
#include "correlation.hpp"
#include "errors.hpp"
#include "monte_carlo.hpp"
#include "quadrature.hpp"
#include "series_density.hpp"
#include "special_functions.hpp"

struct gt_context {
  std::string last_error;
};

namespace {

gt_status fail(gt_context* ctx, gt_status code, const char* message) {
  if (ctx != nullptr) {
    ctx->last_error = message;
  }
  return code;
}

// Runs fn inside the library's exception-to-status mapping.  fn performs
// the work and writes its outputs; any gtours exception becomes the
// corresponding status code with the message stored on the context.
template <class Fn>
gt_status guarded(gt_context* ctx, Fn&& fn) {
  if (ctx == nullptr) {
    return GT_ERR_INVALID_ARGUMENT;
  }
  try {
    fn();
    ctx->last_error.clear();
    return GT_OK;
  } catch (const gtours::unsupported_error& e) {
    return fail(ctx, GT_ERR_UNSUPPORTED, e.what());
  } catch (const gtours::convergence_error& e) {
    return fail(ctx, GT_ERR_CONVERGENCE, e.what());
  } catch (const gtours::covariance_error& e) {
    return fail(ctx, GT_ERR_COVARIANCE, e.what());
  } catch (const gtours::fit_error& e) {
    return fail(ctx, GT_ERR_FIT, e.what());
  } catch (const gtours::domain_error& e) {
    return fail(ctx, GT_ERR_DOMAIN, e.what());
  } catch (const std::exception& e) {
    return fail(ctx, GT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ctx, GT_ERR_INTERNAL, "unknown error");
  }
}

gtours::TourSpec to_spec(gt_tour_spec spec) {
  return {spec.d, spec.n,
          spec.topology == GT_CLOSED ? gtours::Topology::closed
                                     : gtours::Topology::open};
}

gtours::QuadratureConfig to_config(const gt_quad_config* cfg) {
  if (cfg == nullptr) {
    return {};
  }
  return {cfg->tol, cfg->truncation_radius, cfg->max_subdivisions};
}

gtours::SeriesParams to_params(const gt_series_params* params) {
  if (params == nullptr) {
    return {};
  }
  return {params->rho, params->k_max, params->term_tol};
}

gt_integral to_integral(const gtours::IntegralResult& r) {
  return {r.value, r.error, r.evaluations};
}

gt_estimate to_estimate(const gtours::Estimate& e) {
  gt_mc_method method = GT_MC_DIRECT_TOUR;
  switch (e.method) {
    case gtours::McMethod::direct_tour:
      method = GT_MC_DIRECT_TOUR;
      break;
    case gtours::McMethod::correlated_steps:
      method = GT_MC_CORRELATED_STEPS;
      break;
    case gtours::McMethod::sign_expectation:
      method = GT_MC_SIGN_EXPECTATION;
      break;
    case gtours::McMethod::orthant_indicator:
      method = GT_MC_ORTHANT_INDICATOR;
      break;
  }
  return {e.value,    e.stderr_estimate,
          e.samples,  e.seed,
          method,     e.kurtosis,
          e.heavy_tail_warning ? 1 : 0};
}

}  // namespace

extern "C" {

gt_context* gt_context_create(void) {
  try {
    return new gt_context();
  } catch (...) {
    return nullptr;
  }
}

void gt_context_destroy(gt_context* ctx) { delete ctx; }

const char* gt_last_error(const gt_context* ctx) {
  return ctx == nullptr ? "" : ctx->last_error.c_str();
}

void gt_quad_config_default(gt_quad_config* cfg) {
  if (cfg != nullptr) {
    const gtours::QuadratureConfig defaults;
    cfg->tol = defaults.tol;
    cfg->truncation_radius = defaults.truncation_radius;
    cfg->max_subdivisions = defaults.max_subdivisions;
  }
}

void gt_series_params_default(gt_series_params* params) {
  if (params != nullptr) {
    const gtours::SeriesParams defaults;
    params->rho = defaults.rho;
    params->k_max = defaults.k_max;
    params->term_tol = defaults.term_tol;
  }
}

gt_status gt_elliptic_k(gt_context* ctx, double modulus, double* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] { *out = gtours::elliptic_k(modulus); });
}

gt_status gt_elliptic_e(gt_context* ctx, double modulus, double* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] { *out = gtours::elliptic_e(modulus); });
}

gt_status gt_bessel_i_scaled(gt_context* ctx, int order, double x, double* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] { *out = gtours::bessel_i_scaled(order, x); });
}

gt_status gt_gaussian_step_mean(gt_context* ctx, int dimension, double* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] { *out = gtours::gaussian_step_mean(dimension); });
}

gt_status gt_step_rho(gt_context* ctx, int steps, int i, int j, double* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] {
    *out = gtours::StepCorrelations(steps).rho(i, j);
  });
}

gt_status gt_partial_correlation_1(gt_context* ctx, int steps, int i, int j,
                                   int k, double* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] {
    *out = gtours::StepCorrelations(steps).partial_given_one(i, j, k);
  });
}

gt_status gt_partial_correlation_2(gt_context* ctx, int steps, int i, int j,
                                   int k, int l, double* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] {
    *out = gtours::StepCorrelations(steps).partial_given_two(i, j, k, l);
  });
}

gt_status gt_gram_determinant(gt_context* ctx, int steps, double* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] {
    *out = gtours::StepCorrelations(steps).gram_determinant();
  });
}

gt_status gt_orthant_probability_gamma(gt_context* ctx, double* orthant,
                                       double* gamma) {
  if (orthant == nullptr || gamma == nullptr) {
    return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  }
  return guarded(ctx, [&] {
    const auto [p, g] = gtours::orthant_probability_and_sign_gamma();
    *orthant = p;
    *gamma = g;
  });
}

gt_status gt_mu1_open(gt_context* ctx, int steps, double* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] { *out = gtours::mu1_open(steps); });
}

int gt_catalogue_size(void) {
  return static_cast<int>(gtours::catalogue().size());
}

gt_status gt_catalogue_entry(gt_context* ctx, int index, gt_tour_spec* spec,
                             double* value, const char** symbol,
                             const char** expression, const char** provenance) {
  return guarded(ctx, [&] {
    const auto& entries = gtours::catalogue();
    if (index < 0 || index >= static_cast<int>(entries.size())) {
      throw gtours::domain_error("catalogue index out of range");
    }
    const gtours::CatalogueEntry& entry =
        entries[static_cast<std::size_t>(index)];
    if (spec != nullptr) {
      spec->d = entry.spec.d;
      spec->n = entry.spec.n;
      spec->topology = entry.spec.topology == gtours::Topology::closed
                           ? GT_CLOSED
                           : GT_OPEN;
    }
    if (value != nullptr) *value = entry.value;
    if (symbol != nullptr) *symbol = entry.symbol.c_str();
    if (expression != nullptr) *expression = entry.expression.c_str();
    if (provenance != nullptr) *provenance = entry.provenance.c_str();
  });
}

gt_status gt_exact_value(gt_context* ctx, gt_tour_spec spec, int* found,
                         double* value) {
  if (found == nullptr || value == nullptr) {
    return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  }
  return guarded(ctx, [&] {
    const auto entry = gtours::exact_value(to_spec(spec));
    *found = entry.has_value() ? 1 : 0;
    *value = entry.has_value() ? entry->value : 0.0;
  });
}

gt_status gt_mu22_quadrature(gt_context* ctx, const gt_quad_config* cfg,
                             gt_integral* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] {
    *out = to_integral(gtours::mu22_quadrature(to_config(cfg)));
  });
}

gt_status gt_nu23_quadrature(gt_context* ctx, const gt_quad_config* cfg,
                             gt_integral* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] {
    *out = to_integral(gtours::nu23_quadrature(to_config(cfg)));
  });
}

gt_status gt_nu33_quadrature(gt_context* ctx, const gt_quad_config* cfg,
                             gt_integral* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] {
    *out = to_integral(gtours::nu33_quadrature(to_config(cfg)));
  });
}

gt_status gt_joint_density_3step(gt_context* ctx, double a, double b, double c,
                                 const gt_series_params* params, double* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] {
    *out = gtours::joint_density_3step(a, b, c, to_params(params));
  });
}

gt_status gt_mu23_at_rho(gt_context* ctx, const gt_series_params* params,
                         const gt_quad_config* cfg, gt_integral* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] {
    *out = to_integral(gtours::mu23_at_rho(to_params(params), to_config(cfg)));
  });
}

gt_status gt_mu23_extrapolated(gt_context* ctx, const double* rho_grid,
                               int grid_size, const gt_series_params* params,
                               const gt_quad_config* cfg, int max_degree,
                               double* value, double* uncertainty,
                               int* infinite_uncertainty, double* f_values,
                               double* f_errors, double* degree_values,
                               int* degrees_used,
                               unsigned long long* evaluations) {
  if (rho_grid == nullptr || grid_size < 1 || value == nullptr) {
    return fail(ctx, GT_ERR_INVALID_ARGUMENT,
                "need a non-empty grid and a value output");
  }
  return guarded(ctx, [&] {
    const std::span<const double> grid(rho_grid,
                                       static_cast<std::size_t>(grid_size));
    const gtours::Extrapolation r = gtours::mu23_extrapolated(
        grid, to_params(params), to_config(cfg), max_degree);
    *value = r.value;
    if (uncertainty != nullptr) *uncertainty = r.uncertainty;
    if (infinite_uncertainty != nullptr) {
      *infinite_uncertainty = r.infinite_uncertainty ? 1 : 0;
    }
    if (f_values != nullptr) {
      std::memcpy(f_values, r.f_values.data(),
                  r.f_values.size() * sizeof(double));
    }
    if (f_errors != nullptr) {
      std::memcpy(f_errors, r.f_errors.data(),
                  r.f_errors.size() * sizeof(double));
    }
    if (degree_values != nullptr) {
      std::memcpy(degree_values, r.degree_values.data(),
                  r.degree_values.size() * sizeof(double));
    }
    if (degrees_used != nullptr) {
      *degrees_used = static_cast<int>(r.degree_values.size());
    }
    if (evaluations != nullptr) *evaluations = r.evaluations;
  });
}

gt_status gt_estimate_tour(gt_context* ctx, gt_tour_spec spec,
                           unsigned long long samples,
                           unsigned long long seed, int threads,
                           gt_estimate* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] {
    *out = to_estimate(gtours::estimate_tour(to_spec(spec), samples, seed,
                                             threads));
  });
}

gt_status gt_estimate_correlated_product(gt_context* ctx, double rho,
                                         unsigned long long samples,
                                         unsigned long long seed, int threads,
                                         gt_estimate* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] {
    *out = to_estimate(
        gtours::estimate_correlated_product(rho, samples, seed, threads));
  });
}

gt_status gt_estimate_sign_expectation(gt_context* ctx,
                                       unsigned long long samples,
                                       unsigned long long seed, int threads,
                                       gt_estimate* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] {
    *out = to_estimate(
        gtours::estimate_sign_expectation(samples, seed, threads));
  });
}

gt_status gt_estimate_orthant_indicator(gt_context* ctx,
                                        unsigned long long samples,
                                        unsigned long long seed, int threads,
                                        gt_estimate* out) {
  if (out == nullptr) return fail(ctx, GT_ERR_INVALID_ARGUMENT, "null output");
  return guarded(ctx, [&] {
    *out = to_estimate(
        gtours::estimate_orthant_indicator(samples, seed, threads));
  });
}

}  // extern "C"
