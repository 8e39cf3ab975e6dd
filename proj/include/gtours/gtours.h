#ifndef GTOURS_H
#define GTOURS_H

/*
 * C interface to the Gaussian tour library: expected step-length products
 * of open and closed tours through independent standard Gaussian points,
 * computed by four cross-validating engines (closed forms, correlation
 * formulas, deterministic quadrature/series, Monte Carlo).
 *
 * Conventions:
 *   - Every fallible call takes a gt_context* first and returns gt_status.
 *     On failure the context stores a human-readable message retrievable
 *     with gt_last_error().  Output parameters are written only on GT_OK.
 *   - A context is cheap and not thread-safe; use one per thread.
 *   - Strings returned through const char** point at storage owned by the
 *     library with static lifetime; do not free them.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gt_status {
  GT_OK = 0,
  GT_ERR_DOMAIN = 1,        /* argument outside the defined domain */
  GT_ERR_UNSUPPORTED = 2,   /* quantity has no implemented reduction */
  GT_ERR_CONVERGENCE = 3,   /* quadrature or series budget exhausted */
  GT_ERR_COVARIANCE = 4,    /* requested covariance not positive semidefinite */
  GT_ERR_FIT = 5,           /* extrapolation grid cannot support the fit */
  GT_ERR_INVALID_ARGUMENT = 6, /* null pointer or malformed buffer */
  GT_ERR_INTERNAL = 7
} gt_status;

typedef enum gt_topology { GT_OPEN = 0, GT_CLOSED = 1 } gt_topology;

/* Names the quantity: expected step-length product of a tour through
 * independent standard Gaussian points in dimension d with n steps.  Open
 * tours visit n+1 points; closed tours visit n and return to the first
 * (closed requires n >= 2). */
typedef struct gt_tour_spec {
  int d;
  int n;
  gt_topology topology;
} gt_tour_spec;

typedef enum gt_mc_method {
  GT_MC_DIRECT_TOUR = 0,
  GT_MC_CORRELATED_STEPS = 1,
  GT_MC_SIGN_EXPECTATION = 2,
  GT_MC_ORTHANT_INDICATOR = 3
} gt_mc_method;

/* One Monte Carlo estimate.  stderr_estimate is the sample standard
 * deviation over sqrt(samples).  heavy_tail_warning is nonzero when the
 * sample kurtosis exceeds 50, signaling that 3-sigma intervals are only
 * approximate. */
typedef struct gt_estimate {
  double value;
  double stderr_estimate;
  unsigned long long samples;
  unsigned long long seed;
  gt_mc_method method;
  double kurtosis;
  int heavy_tail_warning;
} gt_estimate;

/* One deterministic integral: value, conservative error estimate, and the
 * number of integrand evaluations spent. */
typedef struct gt_integral {
  double value;
  double error;
  unsigned long long evaluations;
} gt_integral;

/* Controls for the deterministic integrals. */
typedef struct gt_quad_config {
  double tol;               /* target relative tolerance, default 1e-8 */
  double truncation_radius; /* finite cutoff for semi-infinite domains, default 14 */
  int max_subdivisions;     /* adaptive panel budget, default 2000 */
} gt_quad_config;

/* Controls for the three-step Bessel-series density at correlation rho
 * (valid range -1/sqrt(2) < rho < 0). */
typedef struct gt_series_params {
  double rho;      /* default -0.45 */
  int k_max;       /* series truncation order, default 80 */
  double term_tol; /* relative term tolerance, default 1e-10 */
} gt_series_params;

typedef struct gt_context gt_context;

gt_context* gt_context_create(void);
void gt_context_destroy(gt_context* ctx);

/* Message describing the most recent failure on this context; empty string
 * if the last call succeeded.  Owned by the context. */
const char* gt_last_error(const gt_context* ctx);

void gt_quad_config_default(gt_quad_config* cfg);
void gt_series_params_default(gt_series_params* params);

/* ---- special functions ---- */

/* Complete elliptic integrals in the modulus convention (xi^2 multiplies
 * the squared sine).  K needs 0 <= xi < 1; E needs 0 <= xi <= 1. */
gt_status gt_elliptic_k(gt_context* ctx, double modulus, double* out);
gt_status gt_elliptic_e(gt_context* ctx, double modulus, double* out);

/* exp(-x) I_order(x), the exponentially scaled modified Bessel function of
 * the first kind; order >= 0, x >= 0. */
gt_status gt_bessel_i_scaled(gt_context* ctx, int order, double x, double* out);

/* Mean step length in dimension d: 2 Gamma((d+1)/2) / Gamma(d/2). */
gt_status gt_gaussian_step_mean(gt_context* ctx, int dimension, double* out);

/* ---- step correlation structure (1-based step indices) ---- */

/* Correlation of steps i and j of an n-step tour: 1 on the diagonal, -1/2
 * for adjacent steps, 0 otherwise. */
gt_status gt_step_rho(gt_context* ctx, int steps, int i, int j, double* out);

/* Partial correlation of steps i and j given k, and given k and l. */
gt_status gt_partial_correlation_1(gt_context* ctx, int steps, int i, int j,
                                   int k, double* out);
gt_status gt_partial_correlation_2(gt_context* ctx, int steps, int i, int j,
                                   int k, int l, double* out);

/* Determinant of the n x n step correlation matrix; equals (n+1)/2^n. */
gt_status gt_gram_determinant(gt_context* ctx, int steps, double* out);

/* Orthant probability of four consecutive steps (1/120) and the sign
 * expectation gamma (2/15) solved from the quadrant identity. */
gt_status gt_orthant_probability_gamma(gt_context* ctx, double* orthant,
                                       double* gamma);

/* mu_{1,n} for n in 1..4 from the arcsin/partial-correlation formulas;
 * GT_ERR_UNSUPPORTED for n > 4. */
gt_status gt_mu1_open(gt_context* ctx, int steps, double* out);

/* ---- exact value catalogue ---- */

int gt_catalogue_size(void);

/* Entry by index in [0, gt_catalogue_size()).  Any output pointer may be
 * NULL to skip that field. */
gt_status gt_catalogue_entry(gt_context* ctx, int index, gt_tour_spec* spec,
                             double* value, const char** symbol,
                             const char** expression, const char** provenance);

/* Looks up an exact value.  *found is 1 and *value filled when the
 * catalogue has the quantity, else *found is 0 (absence is a valid
 * answer, not an error). */
gt_status gt_exact_value(gt_context* ctx, gt_tour_spec spec, int* found,
                         double* value);

/* ---- deterministic quadrature and series ---- */

/* Open two-step planar tour via the two-step length density (equals
 * 4E(1/2) - (3/2)K(1/2)). */
gt_status gt_mu22_quadrature(gt_context* ctx, const gt_quad_config* cfg,
                             gt_integral* out);

/* Closed three-step tours: planar (singular integrand, handled by the
 * z = x - y cos t substitution) and three-dimensional (smooth). */
gt_status gt_nu23_quadrature(gt_context* ctx, const gt_quad_config* cfg,
                             gt_integral* out);
gt_status gt_nu33_quadrature(gt_context* ctx, const gt_quad_config* cfg,
                             gt_integral* out);

/* Joint density of the three step lengths at the series parameters. */
gt_status gt_joint_density_3step(gt_context* ctx, double a, double b, double c,
                                 const gt_series_params* params, double* out);

/* F(rho): expected product of the three step lengths at correlation rho. */
gt_status gt_mu23_at_rho(gt_context* ctx, const gt_series_params* params,
                         const gt_quad_config* cfg, gt_integral* out);

/* Extrapolates F along rho_grid (strictly decreasing, inside (-1/2, 0)) to
 * the physical limit rho = -1/2 with polynomial fits in (rho + 1/2) of
 * degrees 1..max_degree.
 *   f_values, f_errors: per-grid-point F and quadrature error (length
 *     grid_size each; either may be NULL).
 *   degree_values: fit value per degree (length max_degree; may be NULL);
 *     *degrees_used reports how many were possible.
 *   *uncertainty is the difference of the last two fit degrees;
 *     *infinite_uncertainty is 1 for a single-point grid. */
gt_status gt_mu23_extrapolated(gt_context* ctx, const double* rho_grid,
                               int grid_size, const gt_series_params* params,
                               const gt_quad_config* cfg, int max_degree,
                               double* value, double* uncertainty,
                               int* infinite_uncertainty, double* f_values,
                               double* f_errors, double* degree_values,
                               int* degrees_used,
                               unsigned long long* evaluations);

/* ---- Monte Carlo (threads = 0 means the GTOURS_THREADS environment
 * variable, or the hardware concurrency when unset; any worker count
 * yields bit-identical results) ---- */

gt_status gt_estimate_tour(gt_context* ctx, gt_tour_spec spec,
                           unsigned long long samples,
                           unsigned long long seed, int threads,
                           gt_estimate* out);

/* Three planar steps with per-coordinate covariance Psi(rho)/2;
 * rho in [-1/sqrt(2), 0].  At rho = -1/2 this directly estimates the open
 * three-step planar tour value. */
gt_status gt_estimate_correlated_product(gt_context* ctx, double rho,
                                         unsigned long long samples,
                                         unsigned long long seed, int threads,
                                         gt_estimate* out);

/* Sign-product expectation gamma (exact value 2/15) and the orthant
 * indicator probability (exact value 1/120). */
gt_status gt_estimate_sign_expectation(gt_context* ctx,
                                       unsigned long long samples,
                                       unsigned long long seed, int threads,
                                       gt_estimate* out);
gt_status gt_estimate_orthant_indicator(gt_context* ctx,
                                        unsigned long long samples,
                                        unsigned long long seed, int threads,
                                        gt_estimate* out);

#ifdef __cplusplus
}
#endif

#endif /* GTOURS_H */
