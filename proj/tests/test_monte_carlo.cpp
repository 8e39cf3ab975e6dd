#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdlib>

#include "closed_forms.hpp"
#include "errors.hpp"
#include "monte_carlo.hpp"
#include "rng.hpp"

using namespace gtours;

namespace {

bool within_sigma(const Estimate& estimate, double exact, double sigmas) {
  return std::fabs(estimate.value - exact) <
         sigmas * estimate.stderr_estimate;
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  // Reference vectors from the generator's published test suite.
  auto out = Philox4x32::encrypt({0u, 0u, 0u, 0u}, 0u);
  CHECK(out == std::array<std::uint32_t, 4>{0x6627E8D5u, 0xE169C58Du,
                                            0xBC57AC4Cu, 0x9B00DBD8u});
  out = Philox4x32::encrypt({0xFFFFFFFFu, 0xFFFFFFFFu, 0xFFFFFFFFu,
                             0xFFFFFFFFu},
                            0xFFFFFFFFFFFFFFFFull);
  CHECK(out == std::array<std::uint32_t, 4>{0x408F276Du, 0x41C83B0Eu,
                                            0xA20BC7C6u, 0x6D5451FDu});
  out = Philox4x32::encrypt({0x243F6A88u, 0x85A308D3u, 0x13198A2Eu,
                             0x03707344u},
                            0x299F31D0A4093822ull);
  CHECK(out == std::array<std::uint32_t, 4>{0xD16CFE09u, 0x94FDCCEBu,
                                            0x5001E420u, 0x24126EA1u});
}

TEST_CASE("normal quantile against double-precision references") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.6) ==
        doctest::Approx(0.2533471031357997).epsilon(1e-13));
  CHECK(normal_quantile(0.9) ==
        doctest::Approx(1.2815515655446004).epsilon(1e-13));
  CHECK(normal_quantile(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-13));
  CHECK(normal_quantile(0.999) ==
        doctest::Approx(3.090232306167813).epsilon(1e-13));
  CHECK(normal_quantile(0.3) ==
        doctest::Approx(-0.5244005127080409).epsilon(1e-13));
  CHECK(normal_quantile(1e-5) ==
        doctest::Approx(-4.264890793922825).epsilon(1e-13));
  CHECK(normal_quantile(1e-12) ==
        doctest::Approx(-7.034483825301131).epsilon(1e-13));
  CHECK(normal_quantile(1.0 - 1e-14) ==
        doctest::Approx(7.650730905155642).epsilon(1e-12));
  // Symmetry of the tail branches, probed where 1 - p is exact.
  for (double p : {0.4, 0.1, 0.0009765625, 7.450580596923828125e-9}) {
    CHECK(normal_quantile(p) ==
          doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-12));
  }
}

TEST_CASE("normal stream reference draws") {
  NormalStream first(20151217u, 0u, 1u);
  CHECK(first.next() ==
        doctest::Approx(0.17936842925013172).epsilon(1e-15));
  CHECK(first.next() ==
        doctest::Approx(0.7747986164803888).epsilon(1e-15));
  NormalStream second(20151217u, 1u, 1u);
  CHECK(second.next() ==
        doctest::Approx(0.6614289891826501).epsilon(1e-15));
  CHECK(second.next() ==
        doctest::Approx(0.6711090625462367).epsilon(1e-15));
  NormalStream wide(20151217u, (1ull << 33) + 5u, 3u);
  CHECK(wide.next() ==
        doctest::Approx(1.0099435924643019).epsilon(1e-15));
  CHECK(wide.next() ==
        doctest::Approx(-0.46231725387729317).epsilon(1e-15));
}

TEST_CASE("worker count never changes the bits") {
  const TourSpec spec{2, 3, Topology::closed};
  const Estimate one = estimate_tour(spec, 100000, 99, 1);
  const Estimate three = estimate_tour(spec, 100000, 99, 3);
  const Estimate eight = estimate_tour(spec, 100000, 99, 8);
  CHECK(one.value == three.value);
  CHECK(one.value == eight.value);
  CHECK(one.stderr_estimate == three.stderr_estimate);
  CHECK(one.stderr_estimate == eight.stderr_estimate);
  CHECK(one.kurtosis == three.kurtosis);

  const Estimate repeat = estimate_tour(spec, 100000, 99, 3);
  CHECK(repeat.value == three.value);

  setenv("GTOURS_THREADS", "2", 1);
  const Estimate via_env = estimate_tour(spec, 100000, 99, 0);
  unsetenv("GTOURS_THREADS");
  CHECK(via_env.value == one.value);

  const Estimate correlated_a = estimate_correlated_product(-0.5, 20480, 7, 1);
  const Estimate correlated_b = estimate_correlated_product(-0.5, 20480, 7, 5);
  CHECK(correlated_a.value == correlated_b.value);
  const Estimate signs_a = estimate_sign_expectation(20480, 7, 1);
  const Estimate signs_b = estimate_sign_expectation(20480, 7, 4);
  CHECK(signs_a.value == signs_b.value);
  const Estimate orthant_a = estimate_orthant_indicator(20480, 7, 1);
  const Estimate orthant_b = estimate_orthant_indicator(20480, 7, 6);
  CHECK(orthant_a.value == orthant_b.value);
}

TEST_CASE("different seeds give different draws") {
  const TourSpec spec{1, 2, Topology::open};
  CHECK(estimate_tour(spec, 10000, 1).value !=
        estimate_tour(spec, 10000, 2).value);
}

TEST_CASE("direct tours hit the catalogue values") {
  for (const TourSpec spec :
       {TourSpec{1, 1, Topology::open}, TourSpec{1, 4, Topology::open},
        TourSpec{2, 2, Topology::open}, TourSpec{3, 3, Topology::open},
        TourSpec{2, 2, Topology::closed}, TourSpec{5, 2, Topology::closed}}) {
    CAPTURE(symbol_for(spec));
    const auto entry = exact_value(spec);
    REQUIRE(entry.has_value());
    const Estimate estimate = estimate_tour(spec, 200000, 20151217);
    CHECK(within_sigma(estimate, entry->value, 4.0));
    CHECK(estimate.samples == 200000);
    CHECK(estimate.seed == 20151217);
    CHECK(estimate.method == McMethod::direct_tour);
    CHECK(estimate.stderr_estimate > 0.0);
    CHECK(estimate.kurtosis > 1.0);
  }
}

TEST_CASE("standard error shrinks like the square root of the samples") {
  const TourSpec spec{2, 2, Topology::open};
  const Estimate small = estimate_tour(spec, 100000, 5);
  const Estimate large = estimate_tour(spec, 400000, 5);
  CHECK(large.stderr_estimate < small.stderr_estimate);
  CHECK(small.stderr_estimate / large.stderr_estimate ==
        doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("long tours accumulate in log space without overflow") {
  const Estimate estimate = estimate_tour({3, 80, Topology::open}, 4096, 11);
  CHECK(std::isfinite(estimate.value));
  CHECK(estimate.value > 0.0);
}

TEST_CASE("correlated product estimates") {
  const double independent = std::pow(std::acos(-1.0), 1.5);
  const Estimate at_zero = estimate_correlated_product(0.0, 400000, 20151217);
  CHECK(within_sigma(at_zero, independent, 4.0));
  CHECK(at_zero.method == McMethod::correlated_steps);

  // Independent direct-simulation reference for the physical limit.
  const Estimate at_half = estimate_correlated_product(-0.5, 400000, 20151217);
  CHECK(std::fabs(at_half.value - 6.25573) <
        4.0 * std::hypot(at_half.stderr_estimate, 0.00534));

  // The boundary correlation is admissible: the covariance is singular
  // positive semidefinite there.
  const Estimate at_boundary =
      estimate_correlated_product(-1.0 / std::sqrt(2.0), 4096, 3);
  CHECK(std::isfinite(at_boundary.value));

  CHECK_THROWS_AS(estimate_correlated_product(0.1, 4096, 3), domain_error);
  CHECK_THROWS_AS(estimate_correlated_product(-0.75, 4096, 3),
                  covariance_error);
}

TEST_CASE("sign expectation and orthant indicator") {
  const Estimate gamma = estimate_sign_expectation(1000000, 20151217);
  CHECK(within_sigma(gamma, 2.0 / 15.0, 4.0));
  CHECK(gamma.method == McMethod::sign_expectation);
  CHECK(!gamma.heavy_tail_warning);

  const Estimate orthant = estimate_orthant_indicator(1000000, 20151217);
  CHECK(within_sigma(orthant, 1.0 / 120.0, 4.0));
  CHECK(orthant.method == McMethod::orthant_indicator);
  // A rare indicator has kurtosis near 1/(p(1-p)) ~ 121, far over the
  // warning threshold; the flag is doing its job here.
  CHECK(orthant.kurtosis > 50.0);
  CHECK(orthant.heavy_tail_warning);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(estimate_tour({0, 1, Topology::open}, 4096, 1),
                  domain_error);
  CHECK_THROWS_AS(estimate_tour({1, 1, Topology::closed}, 4096, 1),
                  domain_error);
  CHECK_THROWS_AS(estimate_tour({1, 1, Topology::open}, 1, 1), domain_error);
  CHECK_THROWS_AS(estimate_correlated_product(-0.4, 0, 1), domain_error);
  CHECK_THROWS_AS(estimate_sign_expectation(1, 1), domain_error);
  CHECK_THROWS_AS(estimate_orthant_indicator(1, 1), domain_error);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_thread_count(4) == 4);
  setenv("GTOURS_THREADS", "3", 1);
  CHECK(resolve_thread_count(0) == 3);
  setenv("GTOURS_THREADS", "not-a-number", 1);
  CHECK(resolve_thread_count(0) >= 1);
  unsetenv("GTOURS_THREADS");
  CHECK(resolve_thread_count(0) >= 1);
}
