#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace gtours {

// Shared knobs for every deterministic integral: target relative tolerance,
// the cutoff radius replacing infinity in semi-infinite domains, and the
// panel budget of the adaptive subdivision.
struct QuadratureConfig {
  double tol = 1e-8;
  double truncation_radius = 14.0;
  int max_subdivisions = 2000;
};

void validate(const QuadratureConfig& cfg);

// Result of one deterministic integral: the value, a conservative error
// estimate (panel error estimates plus any absolute floors granted to inner
// integrals), and the total integrand evaluation count.
struct IntegralResult {
  double value = 0.0;
  double error = 0.0;
  std::uint64_t evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
// Even-numbered abscissae are the embedded Gauss points.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

// One Gauss-Kronrod evaluation of f over [a, b].  The error estimate is the
// standard scaled difference between the Kronrod and embedded Gauss rules.
template <class F>
Panel gk15(F&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = kKronrodWeights[7] * f_center;
  double gauss = kGaussWeights[3] * f_center;
  double samples[15];
  samples[7] = f_center;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double f_lo = f(center - dx);
    const double f_hi = f(center + dx);
    samples[i] = f_lo;
    samples[14 - i] = f_hi;
    kronrod += kKronrodWeights[i] * (f_lo + f_hi);
    if (i % 2 == 1) {
      gauss += kGaussWeights[i / 2] * (f_lo + f_hi);
    }
  }
  const double value = kronrod * half;
  const double mean = 0.5 * kronrod;
  double spread = kKronrodWeights[7] * std::abs(samples[7] - mean);
  for (int i = 0; i < 7; ++i) {
    spread += kKronrodWeights[i] *
              (std::abs(samples[i] - mean) + std::abs(samples[14 - i] - mean));
  }
  spread *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (spread != 0.0 && err != 0.0) {
    err = spread * std::min(1.0, std::pow(200.0 * err / spread, 1.5));
  }
  return {a, b, value, err};
}

}  // namespace detail

// Globally adaptive 1D integration of f over [a, b]: repeatedly split the
// panel with the largest error estimate until the summed estimate meets
// max(abs_tol, rel_tol * |integral|).  Panels are kept sorted by interval
// start, and the worst panel is chosen by scanning in that order, so the
// subdivision sequence and the final left-to-right summation are fully
// deterministic.
template <class F>
IntegralResult integrate_1d(F&& f, double a, double b, double rel_tol,
                            double abs_tol, int max_subdivisions) {
  if (!(a <= b)) {
    throw domain_error("integrate_1d: interval endpoints out of order");
  }
  IntegralResult result;
  if (a == b) {
    return result;
  }
  std::vector<detail::Panel> panels;
  panels.push_back(detail::gk15(f, a, b));
  result.evaluations = 15;
  for (;;) {
    double total = 0.0;
    double error = 0.0;
    for (const detail::Panel& p : panels) {
      total += p.value;
      error += p.error;
    }
    if (error <= std::max(abs_tol, rel_tol * std::abs(total))) {
      result.value = total;
      result.error = error;
      return result;
    }
    if (static_cast<int>(panels.size()) >= max_subdivisions) {
      throw convergence_error(
          "integrate_1d: tolerance not reached within " +
          std::to_string(max_subdivisions) + " subdivisions (error " +
          std::to_string(error) + ")");
    }
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      if (panels[i].error > panels[worst].error) {
        worst = i;
      }
    }
    const detail::Panel split = panels[worst];
    const double mid = 0.5 * (split.a + split.b);
    if (mid <= split.a || mid >= split.b) {
      throw convergence_error(
          "integrate_1d: interval too small to split further near " +
          std::to_string(split.a));
    }
    panels[worst] = detail::gk15(f, split.a, mid);
    panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(worst) + 1,
                  detail::gk15(f, mid, split.b));
    result.evaluations += 30;
  }
}

// Expected step-length product of the open two-step planar tour, from the
// two-step joint length density: (1/3) * double integral of
// a^2 b^2 exp(-(a^2+b^2)/3) I_0(ab/3) over the positive quadrant.  The
// Bessel scaling is folded into the Gaussian exponent, leaving
// exp(-(a^2-ab+b^2)/3) * scaled_I_0(ab/3), which cannot overflow.
IntegralResult mu22_quadrature(const QuadratureConfig& cfg = {});

// Expected step-length product of the closed three-step planar tour:
// prefactor 4/(3 pi), integrand x^2 y^2 z^2 exp(-(x^2+y^2+z^2)/6) divided by
// sqrt((x+y+z)(-x+y+z)(x-y+z)(x+y-z)), integrated over the triangle domain
// 0 < y < x, |x - y| < z < x + y.  The substitution z = x - y cos(t) turns
// the inverse-square-root boundary factors into dt exactly, leaving a
// bounded integrand on t in (0, pi).
IntegralResult nu23_quadrature(const QuadratureConfig& cfg = {});

// Same closed three-step tour in three dimensions: prefactor 2 sqrt(3)/(9 pi),
// smooth integrand x^2 y^2 z^2 exp(-(x^2+y^2+z^2)/6) over the same domain.
IntegralResult nu33_quadrature(const QuadratureConfig& cfg = {});

}  // namespace gtours
