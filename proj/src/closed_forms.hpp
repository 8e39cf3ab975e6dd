#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gtours {

enum class Topology { open, closed };

// Names one target quantity: the expected product of step lengths of a tour
// through independent standard Gaussian points in R^d.  An open tour visits
// n+1 points and has n steps; a closed tour visits n points and returns to
// the first, so it also has n steps but needs n >= 2 to be non-degenerate.
struct TourSpec {
  int d = 1;
  int n = 1;
  Topology topology = Topology::open;

  friend bool operator==(const TourSpec&, const TourSpec&) = default;
};

// Throws domain_error if the spec is outside the defined family.
void validate(const TourSpec& spec);

// Display name: "mu_{d,n}" for open tours, "nu_{d,n}" for closed ones.
std::string symbol_for(const TourSpec& spec);

// One exactly known value.  `value` is evaluated from `expression` at
// catalogue construction (pi, square roots, arctangents and the complete
// elliptic integrals composed numerically); no decimal constants are stored
// here.  `provenance` distinguishes directly known closed forms from the
// derived second-moment family nu_{d,2} = 2d.
struct CatalogueEntry {
  TourSpec spec;
  std::string symbol;
  std::string expression;
  std::string provenance;
  double value = 0.0;
};

// All 17 exactly known values, in a fixed order (by dimension, open tours
// before closed, then by step count).
const std::vector<CatalogueEntry>& catalogue();

// The catalogue entry for `spec`, or empty if no exact value is known
// (absence is a valid answer: most quantities are only estimable).
std::optional<CatalogueEntry> exact_value(const TourSpec& spec);

}  // namespace gtours
