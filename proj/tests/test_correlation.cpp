#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "closed_forms.hpp"
#include "correlation.hpp"
#include "errors.hpp"

using namespace gtours;

namespace {

double rho_ref(int i, int j) {
  if (i == j) return 1.0;
  return std::abs(i - j) == 1 ? -0.5 : 0.0;
}

// Conditional correlation of steps i and j given one or two others, via the
// Schur complement of the conditioning block: cov(i,j | K) =
// R_ij - R_iK R_KK^{-1} R_Kj, normalized by the conditional variances.
double schur_pc1(int i, int j, int k) {
  const double c = rho_ref(i, j) - rho_ref(i, k) * rho_ref(j, k);
  const double vi = 1.0 - rho_ref(i, k) * rho_ref(i, k);
  const double vj = 1.0 - rho_ref(j, k) * rho_ref(j, k);
  return c / std::sqrt(vi * vj);
}

double schur_pc2(int i, int j, int k, int l) {
  const double det = 1.0 - rho_ref(k, l) * rho_ref(k, l);
  const std::array<std::array<double, 2>, 2> inv{
      {{1.0 / det, -rho_ref(k, l) / det},
       {-rho_ref(k, l) / det, 1.0 / det}}};
  auto cond = [&](int a, int b) {
    double s = 0.0;
    const std::array<double, 2> ra{rho_ref(a, k), rho_ref(a, l)};
    const std::array<double, 2> rb{rho_ref(b, k), rho_ref(b, l)};
    for (int p = 0; p < 2; ++p) {
      for (int q = 0; q < 2; ++q) {
        s += ra[static_cast<std::size_t>(p)] *
             inv[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] *
             rb[static_cast<std::size_t>(q)];
      }
    }
    return rho_ref(a, b) - s;
  };
  return cond(i, j) / std::sqrt(cond(i, i) * cond(j, j));
}

}  // namespace

TEST_CASE("step correlations are tridiagonal") {
  for (int n : {2, 3, 4, 7}) {
    StepCorrelations corr(n);
    CHECK(corr.steps() == n);
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        CAPTURE(n);
        CAPTURE(i);
        CAPTURE(j);
        CHECK(corr.rho(i, j) == rho_ref(i, j));
      }
    }
  }
}

TEST_CASE("gram determinant equals (n+1)/2^n") {
  for (int n = 1; n <= 20; ++n) {
    CAPTURE(n);
    const double expected = (n + 1.0) / std::pow(2.0, n);
    CHECK(StepCorrelations(n).gram_determinant() ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(tridiagonal_determinant(n) ==
          doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("partial correlations given one step") {
  StepCorrelations corr(3);
  const double root3 = std::sqrt(3.0);
  CHECK(corr.partial_given_one(1, 2, 3) ==
        doctest::Approx(-1.0 / root3).epsilon(1e-14));
  CHECK(corr.partial_given_one(1, 3, 2) ==
        doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(corr.partial_given_one(2, 3, 1) ==
        doctest::Approx(-1.0 / root3).epsilon(1e-14));
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      for (int k = 1; k <= 3; ++k) {
        if (i == j || i == k || j == k) continue;
        CAPTURE(i);
        CAPTURE(j);
        CAPTURE(k);
        CHECK(corr.partial_given_one(i, j, k) ==
              doctest::Approx(schur_pc1(i, j, k)).epsilon(1e-13));
        CHECK(corr.partial_given_one(i, j, k) ==
              doctest::Approx(corr.partial_given_one(j, i, k)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("partial correlations given two steps") {
  StepCorrelations corr(4);
  const double root6 = std::sqrt(6.0);
  CHECK(corr.partial_given_two(3, 4, 1, 2) ==
        doctest::Approx(-root6 / 4.0).epsilon(1e-14));
  CHECK(corr.partial_given_two(2, 4, 1, 3) ==
        doctest::Approx(-1.0 / root6).epsilon(1e-14));
  CHECK(corr.partial_given_two(2, 3, 1, 4) ==
        doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
  CHECK(corr.partial_given_two(1, 4, 2, 3) ==
        doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(corr.partial_given_two(1, 3, 2, 4) ==
        doctest::Approx(-1.0 / root6).epsilon(1e-14));
  CHECK(corr.partial_given_two(1, 2, 3, 4) ==
        doctest::Approx(-root6 / 4.0).epsilon(1e-14));

  for (int i = 1; i <= 4; ++i) {
    for (int j = i + 1; j <= 4; ++j) {
      int others[2];
      int count = 0;
      for (int m = 1; m <= 4; ++m) {
        if (m != i && m != j) others[count++] = m;
      }
      const int k = others[0];
      const int l = others[1];
      CAPTURE(i);
      CAPTURE(j);
      const double value = corr.partial_given_two(i, j, k, l);
      CHECK(value == doctest::Approx(schur_pc2(i, j, k, l)).epsilon(1e-13));
      CHECK(value ==
            doctest::Approx(corr.partial_given_two(i, j, l, k)).epsilon(1e-12));
      CHECK(value ==
            doctest::Approx(corr.partial_given_two(j, i, k, l)).epsilon(1e-12));
      CHECK(std::fabs(value) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("orthant probability and sign expectation") {
  const auto [orthant, gamma] = orthant_probability_and_sign_gamma();
  CHECK(std::fabs(orthant - 1.0 / 120.0) < 1e-14);
  CHECK(std::fabs(gamma - 2.0 / 15.0) < 1e-14);
}

TEST_CASE("one-dimensional open tours match the catalogue") {
  for (int n = 1; n <= 4; ++n) {
    CAPTURE(n);
    const auto entry = exact_value({1, n, Topology::open});
    REQUIRE(entry.has_value());
    CHECK(std::fabs(mu1_open(n) - entry->value) < 1e-10);
  }
}

TEST_CASE("domain and support errors") {
  CHECK_THROWS_AS(StepCorrelations(0), domain_error);
  CHECK_THROWS_AS(StepCorrelations(-2), domain_error);
  CHECK_THROWS_AS(StepCorrelations(3).rho(0, 1), domain_error);
  CHECK_THROWS_AS(StepCorrelations(3).rho(1, 4), domain_error);
  CHECK_THROWS_AS(StepCorrelations(3).partial_given_one(1, 1, 2), domain_error);
  CHECK_THROWS_AS(StepCorrelations(4).partial_given_two(1, 2, 2, 4),
                  domain_error);
  CHECK_THROWS_AS(tridiagonal_determinant(0), domain_error);
  CHECK_THROWS_AS(mu1_open(0), domain_error);
  CHECK_THROWS_AS(mu1_open(5), unsupported_error);
}
