#include "closed_forms.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "special_functions.hpp"

namespace gtours {

void validate(const TourSpec& spec) {
  if (spec.d < 1) {
    throw domain_error("TourSpec: dimension must be >= 1, got " +
                       std::to_string(spec.d));
  }
  if (spec.n < 1) {
    throw domain_error("TourSpec: step count must be >= 1, got " +
                       std::to_string(spec.n));
  }
  if (spec.topology == Topology::closed && spec.n < 2) {
    throw domain_error("TourSpec: a closed tour needs at least 2 steps");
  }
}

std::string symbol_for(const TourSpec& spec) {
  const char* base = (spec.topology == Topology::open) ? "mu" : "nu";
  return std::string(base) + "_{" + std::to_string(spec.d) + "," +
         std::to_string(spec.n) + "}";
}

namespace {

constexpr const char* kClosedForm = "closed form";
constexpr const char* kSecondMoment = "derived: nu_{d,2} = 2d (step second moment)";

std::vector<CatalogueEntry> build_catalogue() {
  const double pi = std::numbers::pi;
  const double rpi = std::sqrt(pi);
  const double pi32 = pi * rpi;
  const double r2 = std::sqrt(2.0);
  const double r3 = std::sqrt(3.0);
  const double r5 = std::sqrt(5.0);

  std::vector<CatalogueEntry> entries;
  entries.reserve(17);
  auto add = [&entries](int d, int n, Topology t, const char* expr,
                        const char* provenance, double value) {
    TourSpec spec{d, n, t};
    entries.push_back({spec, symbol_for(spec), expr, provenance, value});
  };

  add(1, 1, Topology::open, "2/sqrt(pi)", kClosedForm, 2.0 / rpi);
  add(1, 2, Topology::open, "1/3 + 2*sqrt(3)/pi", kClosedForm,
      1.0 / 3.0 + 2.0 * r3 / pi);
  add(1, 3, Topology::open,
      "5/sqrt(pi) + 4*sqrt(2)/pi^(3/2) - (12/pi^(3/2))*arctan(sqrt(2))",
      kClosedForm, 5.0 / rpi + 4.0 * r2 / pi32 - 12.0 / pi32 * std::atan(r2));
  add(1, 4, Topology::open,
      "2/15 + 4*sqrt(5)/pi^2 + (8/pi^2)*arctan(sqrt(5)/7)"
      " + (8*sqrt(3)/pi^2)*arctan(sqrt(3/5))",
      kClosedForm,
      2.0 / 15.0 + 4.0 * r5 / (pi * pi) +
          8.0 / (pi * pi) * std::atan(r5 / 7.0) +
          8.0 * r3 / (pi * pi) * std::atan(std::sqrt(3.0 / 5.0)));
  add(1, 2, Topology::closed, "2*1", kSecondMoment, 2.0);
  add(1, 3, Topology::closed, "3/sqrt(pi)", kClosedForm, 3.0 / rpi);
  add(1, 4, Topology::closed, "2/3 - 8/pi + 8*sqrt(3)/pi", kClosedForm,
      2.0 / 3.0 - 8.0 / pi + 8.0 * r3 / pi);

  add(2, 1, Topology::open, "sqrt(pi)", kClosedForm, rpi);
  add(2, 2, Topology::open, "4*E(1/2) - (3/2)*K(1/2)", kClosedForm,
      4.0 * elliptic_e(0.5) - 1.5 * elliptic_k(0.5));
  add(2, 2, Topology::closed, "2*2", kSecondMoment, 4.0);

  add(3, 1, Topology::open, "4/sqrt(pi)", kClosedForm, 4.0 / rpi);
  add(3, 2, Topology::open, "2 + 6*sqrt(3)/pi", kClosedForm, 2.0 + 6.0 * r3 / pi);
  add(3, 3, Topology::open,
      "238/(3*sqrt(pi)) + 56*sqrt(2)/(3*pi^(3/2)) - (216/pi^(3/2))*arctan(sqrt(2))",
      kClosedForm,
      238.0 / (3.0 * rpi) + 56.0 * r2 / (3.0 * pi32) -
          216.0 / pi32 * std::atan(r2));
  add(3, 4, Topology::open,
      "232/45 - 3140/(9*pi) + 56/(sqrt(3)*pi) + 260*sqrt(5)/(9*pi^2)"
      " + (912/pi^2)*arctan(sqrt(5)) + (224/(sqrt(3)*pi^2))*arctan(sqrt(5/3))",
      kClosedForm,
      232.0 / 45.0 - 3140.0 / (9.0 * pi) + 56.0 / (r3 * pi) +
          260.0 * r5 / (9.0 * pi * pi) +
          912.0 / (pi * pi) * std::atan(r5) +
          224.0 / (r3 * pi * pi) * std::atan(std::sqrt(5.0 / 3.0)));
  add(3, 2, Topology::closed, "2*3", kSecondMoment, 6.0);

  add(4, 2, Topology::closed, "2*4", kSecondMoment, 8.0);
  add(5, 2, Topology::closed, "2*5", kSecondMoment, 10.0);

  return entries;
}

}  // namespace

const std::vector<CatalogueEntry>& catalogue() {
  static const std::vector<CatalogueEntry> entries = build_catalogue();
  return entries;
}

std::optional<CatalogueEntry> exact_value(const TourSpec& spec) {
  validate(spec);
  for (const CatalogueEntry& entry : catalogue()) {
    if (entry.spec == spec) {
      return entry;
    }
  }
  return std::nullopt;
}

}  // namespace gtours
