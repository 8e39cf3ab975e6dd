#pragma once

#include <cstdint>

#include "closed_forms.hpp"

namespace gtours {

enum class McMethod {
  direct_tour,
  correlated_steps,
  sign_expectation,
  orthant_indicator,
};

// One stochastic estimate.  stderr_estimate is the sample standard
// deviation over sqrt(samples).  Products of many step lengths have heavy
// right tails; when the sample kurtosis exceeds 50 the heavy_tail_warning
// flag signals that 3-sigma intervals are only approximate.
struct Estimate {
  double value = 0.0;
  double stderr_estimate = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  McMethod method = McMethod::direct_tour;
  double kurtosis = 0.0;
  bool heavy_tail_warning = false;
};

// Fixed accumulation block size: samples are processed in consecutive
// blocks of this many, each block's raw moments summed serially in index
// order, and block results combined by a pairwise tree in block order.
// Worker count therefore never affects the result bits.
inline constexpr std::uint64_t kMcBlockSize = 4096;

// Threads actually used when a caller passes threads = 0: the value of the
// GTOURS_THREADS environment variable if set and positive, otherwise the
// hardware concurrency.
int resolve_thread_count(int threads);

// Direct simulation of the expected step-length product of a tour:
// independent standard Gaussian points in R^d, product of the n step
// norms (the closing step returns to the first point for closed tours).
// For step counts above 64 the per-sample product is accumulated in log
// space to avoid intermediate overflow.
Estimate estimate_tour(const TourSpec& spec, std::uint64_t samples,
                       std::uint64_t seed, int threads = 0);

// Samples three zero-mean planar steps whose per-coordinate covariance is
// Psi(rho)/2 and estimates E(|z1| |z2| |z3|) = F(rho).  The covariance is
// factored by symmetric eigendecomposition with eigenvalues below 1e-10
// clamped to zero, so the boundary rho = -1/sqrt(2), where Psi is singular
// positive semidefinite, is admissible; an eigenvalue below -1e-10 raises
// covariance_error.  At rho = -1/2 the covariance equals that of three
// consecutive tour steps, making this a direct estimator of the open
// three-step planar tour value.
Estimate estimate_correlated_product(double rho, std::uint64_t samples,
                                     std::uint64_t seed, int threads = 0);

// Estimates gamma = E[sgn(s1) sgn(s2) sgn(s3) sgn(s4)] over four
// consecutive steps of five independent one-dimensional Gaussian points
// (sgn(x) = 1 for x >= 0).  Exact value 2/15.
Estimate estimate_sign_expectation(std::uint64_t samples, std::uint64_t seed,
                                   int threads = 0);

// Estimates the orthant probability P(all four consecutive steps positive),
// i.e. the probability that five independent Gaussian points come out in
// increasing order.  Exact value 1/120.
Estimate estimate_orthant_indicator(std::uint64_t samples, std::uint64_t seed,
                                    int threads = 0);

}  // namespace gtours
