#include "correlation.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"

namespace gtours {

StepCorrelations::StepCorrelations(int steps) : steps_(steps) {
  if (steps < 1) {
    throw domain_error("StepCorrelations: need at least one step, got " +
                       std::to_string(steps));
  }
}

void StepCorrelations::require_index(int i, const char* where) const {
  if (i < 1 || i > steps_) {
    throw domain_error(std::string(where) + ": step index " + std::to_string(i) +
                       " outside 1.." + std::to_string(steps_));
  }
}

double StepCorrelations::rho(int i, int j) const {
  require_index(i, "rho");
  require_index(j, "rho");
  if (i == j) {
    return 1.0;
  }
  return (std::abs(i - j) == 1) ? -0.5 : 0.0;
}

double StepCorrelations::partial_given_one(int i, int j, int k) const {
  if (i == j || i == k || j == k) {
    throw domain_error("partial_given_one: indices must be distinct");
  }
  const double rik = rho(i, k);
  const double rjk = rho(j, k);
  return (rho(i, j) - rik * rjk) /
         std::sqrt((1.0 - rik * rik) * (1.0 - rjk * rjk));
}

double StepCorrelations::partial_given_two(int i, int j, int k, int l) const {
  if (i == j || i == k || i == l || j == k || j == l || k == l) {
    throw domain_error("partial_given_two: indices must be distinct");
  }
  const double rij_k = partial_given_one(i, j, k);
  const double ril_k = partial_given_one(i, l, k);
  const double rjl_k = partial_given_one(j, l, k);
  return (rij_k - ril_k * rjl_k) /
         std::sqrt((1.0 - ril_k * ril_k) * (1.0 - rjl_k * rjl_k));
}

double StepCorrelations::gram_determinant() const {
  const int n = steps_;
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m[static_cast<std::size_t>(i) * n + j] = rho(i + 1, j + 1);
    }
  }
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::abs(m[static_cast<std::size_t>(row) * n + col]) >
          std::abs(m[static_cast<std::size_t>(pivot) * n + col])) {
        pivot = row;
      }
    }
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(m[static_cast<std::size_t>(pivot) * n + j],
                  m[static_cast<std::size_t>(col) * n + j]);
      }
      det = -det;
    }
    const double p = m[static_cast<std::size_t>(col) * n + col];
    if (p == 0.0) {
      return 0.0;
    }
    det *= p;
    for (int row = col + 1; row < n; ++row) {
      const double factor = m[static_cast<std::size_t>(row) * n + col] / p;
      if (factor == 0.0) {
        continue;
      }
      for (int j = col; j < n; ++j) {
        m[static_cast<std::size_t>(row) * n + j] -=
            factor * m[static_cast<std::size_t>(col) * n + j];
      }
    }
  }
  return det;
}

double tridiagonal_determinant(int steps) {
  if (steps < 1) {
    throw domain_error("tridiagonal_determinant: need at least one step, got " +
                       std::to_string(steps));
  }
  double prev = 1.0;  // D_0
  double cur = 1.0;   // D_1
  for (int k = 2; k <= steps; ++k) {
    const double next = cur - 0.25 * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::pair<double, double> orthant_probability_and_sign_gamma() {
  const StepCorrelations corr(4);
  double arcsin_sum = 0.0;
  for (int i = 1; i <= 4; ++i) {
    for (int j = i + 1; j <= 4; ++j) {
      arcsin_sum += std::asin(corr.rho(i, j));
    }
  }
  const double orthant = 1.0 / 120.0;
  const double gamma =
      16.0 * (orthant - 1.0 / 16.0 - arcsin_sum / (8.0 * std::numbers::pi));
  return {orthant, gamma};
}

double mu1_open(int steps) {
  if (steps < 1) {
    throw domain_error("mu1_open: need at least one step, got " +
                       std::to_string(steps));
  }
  if (steps > 4) {
    throw unsupported_error(
        "mu1_open: absolute-moment reduction implemented only for 1..4 steps, got " +
        std::to_string(steps));
  }
  const double pi = std::numbers::pi;
  if (steps == 1) {
    return 2.0 / std::sqrt(pi);
  }
  const StepCorrelations corr(steps);
  const double root_det = std::sqrt(corr.gram_determinant());
  if (steps == 2) {
    const double r = corr.rho(1, 2);
    return (4.0 / pi) * (root_det + r * std::asin(r));
  }
  if (steps == 3) {
    double sum = root_det;
    const int other[3][2] = {{2, 3}, {1, 3}, {1, 2}};
    for (int t = 0; t < 3; ++t) {
      const int i = other[t][0];
      const int j = other[t][1];
      const int k = 6 - i - j;
      sum += (corr.rho(i, j) + corr.rho(i, k) * corr.rho(j, k)) *
             std::asin(corr.partial_given_one(i, j, k));
    }
    return (8.0 / std::pow(pi, 1.5)) * sum;
  }
  // Four steps: pair terms conditioned on the complementary pair, plus the
  // sign-product correction through gamma.
  const double gamma = orthant_probability_and_sign_gamma().second;
  double sum = root_det;
  double pair_products = 0.0;
  const int pairs[3][4] = {{1, 2, 3, 4}, {1, 3, 2, 4}, {1, 4, 2, 3}};
  for (const auto& p : pairs) {
    pair_products += corr.rho(p[0], p[1]) * corr.rho(p[2], p[3]);
  }
  for (int i = 1; i <= 4; ++i) {
    for (int j = i + 1; j <= 4; ++j) {
      int rest[2];
      int idx = 0;
      for (int m = 1; m <= 4; ++m) {
        if (m != i && m != j) {
          rest[idx++] = m;
        }
      }
      const int k = rest[0];
      const int l = rest[1];
      const double rkl = corr.rho(k, l);
      const double weight = corr.rho(i, j) + corr.rho(k, i) * corr.rho(k, j) +
                            corr.rho(l, i) * corr.rho(l, j);
      sum += std::sqrt(1.0 - rkl * rkl) * weight *
             std::asin(corr.partial_given_two(i, j, k, l));
    }
  }
  return (16.0 / (pi * pi)) * sum + 4.0 * pair_products * gamma;
}

}  // namespace gtours
