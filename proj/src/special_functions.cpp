#include "special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"

namespace gtours {

namespace {

struct AgmResult {
  double mean;        // common limit of the arithmetic-geometric iteration
  double half_c_sum;  // sum over n of 2^(n-1) * c_n^2, with c_0 = modulus
};

AgmResult agm(double modulus) {
  double a = 1.0;
  double b = std::sqrt((1.0 - modulus) * (1.0 + modulus));
  double c = modulus;
  double sum = 0.5 * c * c;
  double weight = 0.5;
  for (int iter = 0; iter < 60 && std::abs(c) > std::numeric_limits<double>::epsilon() * a;
       ++iter) {
    c = 0.5 * (a - b);
    const double a_next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = a_next;
    weight *= 2.0;
    sum += weight * c * c;
  }
  return {a, sum};
}

}  // namespace

double elliptic_k(double modulus) {
  if (!(modulus >= 0.0) || modulus >= 1.0) {
    throw domain_error("elliptic_k: modulus must satisfy 0 <= xi < 1, got " +
                       std::to_string(modulus));
  }
  return std::numbers::pi / (2.0 * agm(modulus).mean);
}

double elliptic_e(double modulus) {
  if (!(modulus >= 0.0) || modulus > 1.0) {
    throw domain_error("elliptic_e: modulus must satisfy 0 <= xi <= 1, got " +
                       std::to_string(modulus));
  }
  if (modulus == 1.0) {
    return 1.0;
  }
  const AgmResult r = agm(modulus);
  const double k = std::numbers::pi / (2.0 * r.mean);
  return k * (1.0 - r.half_c_sum);
}

void bessel_i_scaled_all(double x, std::span<double> out) {
  if (out.empty()) {
    return;
  }
  if (!(x >= 0.0)) {
    throw domain_error("bessel_i_scaled_all: argument must be >= 0, got " +
                       std::to_string(x));
  }
  const int top = static_cast<int>(out.size()) - 1;

  // For very small arguments the backward recurrence divides by x; the
  // ascending series truncated after its second term is already at full
  // double precision there.
  if (x < 1e-8) {
    const double half = 0.5 * x;
    const double damp = std::exp(-x);
    double lead = 1.0;  // (x/2)^k / k!
    for (int k = 0; k <= top; ++k) {
      out[k] = damp * lead * (1.0 + half * half / (k + 1));
      lead *= half / (k + 1);
    }
    return;
  }

  // Miller's backward recurrence: run I_{k-1} = I_{k+1} + (2k/x) I_k down
  // from a starting order high enough that the seed error has decayed away,
  // then normalize with exp(-x) (I_0 + 2 sum_{k>=1} I_k) = 1.  The upward
  // recurrence is unstable for k > x and must not be used here.
  const int start = std::max(top + 20,
                             static_cast<int>(std::ceil(x + 12.0 * std::sqrt(x) + 40.0)));
  std::fill(out.begin(), out.end(), 0.0);
  double above = 0.0;
  double current = 1e-280;
  double norm = 0.0;
  for (int k = start; k >= 0; --k) {
    if (k <= top) {
      out[k] = current;
    }
    norm += (k == 0) ? current : 2.0 * current;
    if (k > 0) {
      const double below = above + (2.0 * k / x) * current;
      above = current;
      current = below;
      if (std::abs(current) > 1e250) {
        const double scale = 1e-250;
        current *= scale;
        above *= scale;
        norm *= scale;
        for (double& v : out) {
          v *= scale;
        }
      }
    }
  }
  for (double& v : out) {
    v /= norm;
  }
}

double bessel_i_scaled(int order, double x) {
  if (order < 0) {
    throw domain_error("bessel_i_scaled: order must be >= 0, got " +
                       std::to_string(order));
  }
  std::vector<double> values(static_cast<std::size_t>(order) + 1);
  bessel_i_scaled_all(x, values);
  return values.back();
}

double gaussian_step_mean(int dimension) {
  if (dimension < 1) {
    throw domain_error("gaussian_step_mean: dimension must be >= 1, got " +
                       std::to_string(dimension));
  }
  const double d = dimension;
  return 2.0 * std::exp(std::lgamma(0.5 * (d + 1.0)) - std::lgamma(0.5 * d));
}

}  // namespace gtours
