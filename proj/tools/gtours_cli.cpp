// Command-line front end for the Gaussian tour library.  Talks to the
// library exclusively through the C interface in gtours/gtours.h.
//
// Exit status: 0 success, 1 at least one cross-check disagreed, 2 usage
// error, 3 engine failure.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gtours/gtours.h"

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr unsigned long long kDefaultSeed = 20151217ull;

std::string strprintf(const char* format, ...) {
  va_list args;
  va_start(args, format);
  va_list sizing;
  va_copy(sizing, args);
  const int length = std::vsnprintf(nullptr, 0, format, sizing);
  va_end(sizing);
  std::string out(length > 0 ? static_cast<size_t>(length) : 0, '\0');
  std::vsnprintf(out.data(), out.size() + 1, format, args);
  va_end(args);
  return out;
}

[[noreturn]] void die_engine(gt_context* ctx) {
  const char* message = ctx ? gt_last_error(ctx) : "";
  std::fprintf(stderr, "gtours: %s\n",
               (message && *message) ? message : "engine failure");
  std::exit(3);
}

[[noreturn]] void die_usage(const std::string& message) {
  std::fprintf(stderr, "gtours: %s\n", message.c_str());
  std::exit(2);
}

void require_ok(gt_context* ctx, gt_status status) {
  if (status != GT_OK) die_engine(ctx);
}

struct Context {
  gt_context* ptr = gt_context_create();
  Context() {
    if (!ptr) {
      std::fprintf(stderr, "gtours: cannot create library context\n");
      std::exit(3);
    }
  }
  ~Context() { gt_context_destroy(ptr); }
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;
};

// Two estimates agree when their difference fits inside three combined
// standard errors plus a relative floor that keeps the window meaningful
// when both sides are deterministic.
struct Agreement {
  double diff = 0.0;
  double window = 0.0;
  bool ok = false;
};

Agreement check_agreement(double value_a, double error_a, double value_b,
                          double error_b, double tol) {
  Agreement result;
  result.diff = std::fabs(value_a - value_b);
  const double scale =
      std::max({1.0, std::fabs(value_a), std::fabs(value_b)});
  result.window = 3.0 * std::hypot(error_a, error_b) + tol * scale;
  result.ok = result.diff < result.window;
  return result;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buffer;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  FILE* file = std::fopen(path.c_str(), "wb");
  if (!file) {
    std::fprintf(stderr, "gtours: cannot open %s for writing\n", path.c_str());
    std::exit(3);
  }
  std::fputs(text.c_str(), file);
  std::fclose(file);
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string topology_name(gt_topology topology) {
  return topology == GT_CLOSED ? "closed" : "open";
}

std::string symbol_of(gt_tour_spec spec) {
  return strprintf("%s_{%d,%d}", spec.topology == GT_CLOSED ? "nu" : "mu",
                   spec.d, spec.n);
}

struct CatalogueEntry {
  gt_tour_spec spec{};
  double value = 0.0;
  std::string symbol;
  std::string expression;
  std::string provenance;
};

std::vector<CatalogueEntry> load_catalogue(gt_context* ctx) {
  std::vector<CatalogueEntry> entries;
  const int size = gt_catalogue_size();
  entries.reserve(static_cast<size_t>(size));
  for (int i = 0; i < size; ++i) {
    CatalogueEntry entry;
    const char* symbol = nullptr;
    const char* expression = nullptr;
    const char* provenance = nullptr;
    require_ok(ctx, gt_catalogue_entry(ctx, i, &entry.spec, &entry.value,
                                       &symbol, &expression, &provenance));
    entry.symbol = symbol;
    entry.expression = expression;
    entry.provenance = provenance;
    entries.push_back(std::move(entry));
  }
  return entries;
}

// Accepts "mu_{2,3}", "mu_2_3", "mu23", and the same shapes with "nu".
bool parse_symbol(const std::string& text, gt_tour_spec* spec) {
  gt_topology topology;
  if (text.rfind("mu", 0) == 0) {
    topology = GT_OPEN;
  } else if (text.rfind("nu", 0) == 0) {
    topology = GT_CLOSED;
  } else {
    return false;
  }
  std::vector<std::string> runs;
  for (size_t i = 2; i < text.size();) {
    if (std::isdigit(static_cast<unsigned char>(text[i]))) {
      size_t j = i;
      while (j < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[j]))) {
        ++j;
      }
      runs.push_back(text.substr(i, j - i));
      i = j;
    } else {
      ++i;
    }
  }
  if (runs.size() == 1 && runs[0].size() == 2) {
    runs = {runs[0].substr(0, 1), runs[0].substr(1, 1)};
  }
  if (runs.size() != 2) return false;
  spec->d = std::atoi(runs[0].c_str());
  spec->n = std::atoi(runs[1].c_str());
  spec->topology = topology;
  return true;
}

// ---- report rendering ----

struct CheckResult {
  std::string name;
  std::string engine_a;
  double value_a = 0.0;
  double error_a = 0.0;
  std::string engine_b;
  double value_b = 0.0;
  double error_b = 0.0;
  unsigned long long samples = 0;
  unsigned long long seed = 0;
  bool heavy_tail = false;
  Agreement agreement;
};

ordered_json check_to_json(const CheckResult& check) {
  ordered_json j;
  j["name"] = check.name;
  j["reference"] = {{"engine", check.engine_a},
                    {"value", check.value_a},
                    {"error", check.error_a}};
  ordered_json estimate = {{"engine", check.engine_b},
                           {"value", check.value_b},
                           {"error", check.error_b}};
  if (check.samples > 0) {
    estimate["samples"] = check.samples;
    estimate["seed"] = check.seed;
  }
  if (check.heavy_tail) estimate["heavy_tail_warning"] = true;
  j["estimate"] = std::move(estimate);
  j["diff"] = check.agreement.diff;
  j["window"] = check.agreement.window;
  j["agree"] = check.agreement.ok;
  return j;
}

std::string check_to_text(const CheckResult& check) {
  return strprintf(
      "%-10s %-12s %15.10f   %-12s %15.10f +- %9.3e   diff %9.3e  window "
      "%9.3e  %s\n",
      check.name.c_str(), check.engine_a.c_str(), check.value_a,
      check.engine_b.c_str(), check.value_b, check.error_b,
      check.agreement.diff, check.agreement.window,
      check.agreement.ok ? "ok" : "FAIL");
}

std::string check_to_csv(const CheckResult& check) {
  return strprintf("%s,%s,%.17g,%.17g,%s,%.17g,%.17g,%llu,%llu,%.17g,%.17g,%s\n",
                   csv_field(check.name).c_str(), check.engine_a.c_str(),
                   check.value_a, check.error_a, check.engine_b.c_str(),
                   check.value_b, check.error_b, check.samples, check.seed,
                   check.agreement.diff, check.agreement.window,
                   check.agreement.ok ? "true" : "false");
}

// ---- table ----

int run_table(gt_context* ctx, const std::string& format,
              const std::string& out_path, bool timestamp) {
  const auto entries = load_catalogue(ctx);
  std::string text;
  if (format == "json") {
    ordered_json report;
    report["schema"] = "gtours-report-v1";
    report["command"] = "table";
    if (timestamp) report["timestamp"] = utc_timestamp();
    ordered_json rows = ordered_json::array();
    for (const auto& entry : entries) {
      rows.push_back({{"symbol", entry.symbol},
                      {"d", entry.spec.d},
                      {"n", entry.spec.n},
                      {"topology", topology_name(entry.spec.topology)},
                      {"value", entry.value},
                      {"expression", entry.expression},
                      {"provenance", entry.provenance}});
    }
    report["entries"] = std::move(rows);
    text = report.dump(2) + "\n";
  } else if (format == "csv") {
    text = "symbol,d,n,topology,value,expression,provenance\n";
    for (const auto& entry : entries) {
      text += strprintf("%s,%d,%d,%s,%.17g,%s,%s\n",
                        csv_field(entry.symbol).c_str(), entry.spec.d,
                        entry.spec.n, topology_name(entry.spec.topology).c_str(),
                        entry.value, csv_field(entry.expression).c_str(),
                        csv_field(entry.provenance).c_str());
    }
  } else {
    text = strprintf("%-10s %2s %2s %-7s %18s  %s\n", "symbol", "d", "n",
                     "shape", "value", "expression");
    for (const auto& entry : entries) {
      text += strprintf("%-10s %2d %2d %-7s %18.14f  %s\n",
                        entry.symbol.c_str(), entry.spec.d, entry.spec.n,
                        topology_name(entry.spec.topology).c_str(), entry.value,
                        entry.expression.c_str());
    }
  }
  write_output(text, out_path);
  return 0;
}

// ---- verify ----

CheckResult run_catalogue_check(gt_context* ctx, const CatalogueEntry& entry,
                                unsigned long long samples,
                                unsigned long long seed, double tol) {
  gt_estimate estimate{};
  require_ok(ctx, gt_estimate_tour(ctx, entry.spec, samples, seed, 0,
                                   &estimate));
  CheckResult check;
  check.name = entry.symbol;
  check.engine_a = "exact";
  check.value_a = entry.value;
  check.error_a = 0.0;
  check.engine_b = "monte-carlo";
  check.value_b = estimate.value;
  check.error_b = estimate.stderr_estimate;
  check.samples = estimate.samples;
  check.seed = estimate.seed;
  check.heavy_tail = estimate.heavy_tail_warning != 0;
  check.agreement = check_agreement(check.value_a, check.error_a,
                                    check.value_b, check.error_b, tol);
  return check;
}

CheckResult run_quadrature_check(gt_context* ctx, gt_tour_spec spec,
                                 unsigned long long samples,
                                 unsigned long long seed, double tol) {
  gt_quad_config cfg;
  gt_quad_config_default(&cfg);
  gt_integral integral{};
  if (spec.d == 2) {
    require_ok(ctx, gt_nu23_quadrature(ctx, &cfg, &integral));
  } else {
    require_ok(ctx, gt_nu33_quadrature(ctx, &cfg, &integral));
  }
  gt_estimate estimate{};
  require_ok(ctx, gt_estimate_tour(ctx, spec, samples, seed, 0, &estimate));
  CheckResult check;
  check.name = symbol_of(spec);
  check.engine_a = "quadrature";
  check.value_a = integral.value;
  check.error_a = integral.error;
  check.engine_b = "monte-carlo";
  check.value_b = estimate.value;
  check.error_b = estimate.stderr_estimate;
  check.samples = estimate.samples;
  check.seed = estimate.seed;
  check.heavy_tail = estimate.heavy_tail_warning != 0;
  check.agreement = check_agreement(check.value_a, check.error_a,
                                    check.value_b, check.error_b, tol);
  return check;
}

bool same_spec(gt_tour_spec a, gt_tour_spec b) {
  return a.d == b.d && a.n == b.n && a.topology == b.topology;
}

int run_verify(gt_context* ctx, const std::string& target,
               unsigned long long samples, unsigned long long seed, double tol,
               const std::string& format, const std::string& out_path,
               bool timestamp) {
  const auto entries = load_catalogue(ctx);
  const gt_tour_spec nu23{2, 3, GT_CLOSED};
  const gt_tour_spec nu33{3, 3, GT_CLOSED};

  std::vector<CheckResult> checks;
  if (target == "all") {
    for (const auto& entry : entries) {
      checks.push_back(run_catalogue_check(ctx, entry, samples, seed, tol));
    }
    checks.push_back(run_quadrature_check(ctx, nu23, samples, seed, tol));
    checks.push_back(run_quadrature_check(ctx, nu33, samples, seed, tol));
  } else {
    gt_tour_spec spec{};
    if (!parse_symbol(target, &spec)) {
      die_usage("unrecognized target '" + target +
                "': expected 'all' or a symbol like mu_{1,3} or nu_2_3");
    }
    const CatalogueEntry* hit = nullptr;
    for (const auto& entry : entries) {
      if (same_spec(entry.spec, spec)) {
        hit = &entry;
        break;
      }
    }
    if (hit) {
      checks.push_back(run_catalogue_check(ctx, *hit, samples, seed, tol));
    } else if (same_spec(spec, nu23) || same_spec(spec, nu33)) {
      checks.push_back(run_quadrature_check(ctx, spec, samples, seed, tol));
    } else if (same_spec(spec, gt_tour_spec{2, 3, GT_OPEN})) {
      die_usage("mu_{2,3} has no closed form; use the mu23 command");
    } else {
      die_usage("no exact reference for " + symbol_of(spec) +
                "; use 'estimate' for Monte Carlo only");
    }
  }

  bool all_agree = true;
  for (const auto& check : checks) all_agree = all_agree && check.agreement.ok;

  std::string text;
  if (format == "json") {
    ordered_json report;
    report["schema"] = "gtours-report-v1";
    report["command"] = "verify";
    report["config"] = {{"target", target},
                        {"samples", samples},
                        {"seed", seed},
                        {"tol", tol}};
    if (timestamp) report["timestamp"] = utc_timestamp();
    ordered_json rows = ordered_json::array();
    for (const auto& check : checks) rows.push_back(check_to_json(check));
    report["checks"] = std::move(rows);
    report["all_agree"] = all_agree;
    text = report.dump(2) + "\n";
  } else if (format == "csv") {
    text =
        "name,reference_engine,reference_value,reference_error,"
        "estimate_engine,estimate_value,estimate_error,samples,seed,diff,"
        "window,agree\n";
    for (const auto& check : checks) text += check_to_csv(check);
  } else {
    for (const auto& check : checks) text += check_to_text(check);
    size_t passed = 0;
    for (const auto& check : checks) passed += check.agreement.ok ? 1 : 0;
    text += strprintf("%zu/%zu checks agree\n", passed, checks.size());
  }
  write_output(text, out_path);
  return all_agree ? 0 : 1;
}

// ---- estimate ----

int run_estimate(gt_context* ctx, int d, int n, bool closed,
                 unsigned long long samples, unsigned long long seed,
                 double tol, const std::string& format,
                 const std::string& out_path, bool timestamp) {
  const gt_tour_spec spec{d, n, closed ? GT_CLOSED : GT_OPEN};
  if (closed && n < 2) die_usage("closed tours need at least two steps");

  ordered_json report;
  report["schema"] = "gtours-report-v1";
  report["command"] = "estimate";
  report["quantity"] = {{"symbol", symbol_of(spec)},
                        {"d", d},
                        {"n", n},
                        {"topology", topology_name(spec.topology)}};
  report["config"] = {{"samples", samples}, {"seed", seed}, {"tol", tol}};
  if (timestamp) report["timestamp"] = utc_timestamp();

  std::string engine;
  double value = 0.0;
  double error = 0.0;
  std::string detail_text;

  int found = 0;
  double exact = 0.0;
  require_ok(ctx, gt_exact_value(ctx, spec, &found, &exact));
  if (found) {
    engine = "exact";
    value = exact;
    for (const auto& entry : load_catalogue(ctx)) {
      if (same_spec(entry.spec, spec)) {
        report["expression"] = entry.expression;
        report["provenance"] = entry.provenance;
        detail_text = strprintf("expression:  %s\n", entry.expression.c_str());
        break;
      }
    }
  } else if ((d == 2 || d == 3) && n == 3 && closed) {
    engine = "quadrature";
    gt_quad_config cfg;
    gt_quad_config_default(&cfg);
    cfg.tol = tol;
    gt_integral integral{};
    if (d == 2) {
      require_ok(ctx, gt_nu23_quadrature(ctx, &cfg, &integral));
    } else {
      require_ok(ctx, gt_nu33_quadrature(ctx, &cfg, &integral));
    }
    value = integral.value;
    error = integral.error;
    report["evaluations"] = integral.evaluations;
    detail_text = strprintf("evaluations: %llu\n", integral.evaluations);
  } else if (d == 2 && n == 3 && !closed) {
    engine = "series-extrapolation";
    const std::vector<double> grid{-0.40, -0.43, -0.45, -0.47, -0.48};
    gt_series_params params;
    gt_series_params_default(&params);
    gt_quad_config cfg;
    gt_quad_config_default(&cfg);
    std::vector<double> f(grid.size()), f_err(grid.size());
    std::vector<double> degree_values(3);
    int infinite = 0;
    int degrees_used = 0;
    unsigned long long evaluations = 0;
    require_ok(ctx, gt_mu23_extrapolated(
                        ctx, grid.data(), static_cast<int>(grid.size()),
                        &params, &cfg, 3, &value, &error, &infinite, f.data(),
                        f_err.data(), degree_values.data(), &degrees_used,
                        &evaluations));
    report["rho_grid"] = grid;
    report["degree_values"] = std::vector<double>(
        degree_values.begin(), degree_values.begin() + degrees_used);
    report["evaluations"] = evaluations;
    detail_text = strprintf("evaluations: %llu\n", evaluations);
  } else {
    engine = "monte-carlo";
    gt_estimate estimate{};
    require_ok(ctx,
               gt_estimate_tour(ctx, spec, samples, seed, 0, &estimate));
    value = estimate.value;
    error = estimate.stderr_estimate;
    report["samples"] = estimate.samples;
    report["seed"] = estimate.seed;
    report["kurtosis"] = estimate.kurtosis;
    if (estimate.heavy_tail_warning) report["heavy_tail_warning"] = true;
    detail_text = strprintf("samples:     %llu (seed %llu)\n",
                            estimate.samples, estimate.seed);
  }
  report["engine"] = engine;
  report["value"] = value;
  report["error"] = error;

  std::string text;
  if (format == "json") {
    text = report.dump(2) + "\n";
  } else if (format == "csv") {
    text = "symbol,d,n,topology,engine,value,error\n";
    text += strprintf("%s,%d,%d,%s,%s,%.17g,%.17g\n",
                      csv_field(symbol_of(spec)).c_str(), d, n,
                      topology_name(spec.topology).c_str(), engine.c_str(),
                      value, error);
  } else {
    text = strprintf("%s  (d=%d, n=%d, %s)\n", symbol_of(spec).c_str(), d, n,
                     topology_name(spec.topology).c_str());
    text += strprintf("engine:      %s\n", engine.c_str());
    text += strprintf("value:       %.15g\n", value);
    text += strprintf("error:       %.3e\n", error);
    text += detail_text;
  }
  write_output(text, out_path);
  return 0;
}

// ---- mu23 ----

int run_mu23(gt_context* ctx, const std::string& grid_text,
             unsigned long long samples, unsigned long long seed, double tol,
             int k_max, double term_tol, const std::string& format,
             const std::string& out_path, bool timestamp) {
  std::vector<double> grid;
  size_t start = 0;
  while (start <= grid_text.size()) {
    size_t comma = grid_text.find(',', start);
    if (comma == std::string::npos) comma = grid_text.size();
    const std::string piece = grid_text.substr(start, comma - start);
    if (!piece.empty()) {
      char* end = nullptr;
      const double rho = std::strtod(piece.c_str(), &end);
      if (end == piece.c_str() || *end != '\0') {
        die_usage("cannot parse --rho-grid entry '" + piece + "'");
      }
      grid.push_back(rho);
    }
    start = comma + 1;
  }
  if (grid.empty()) die_usage("--rho-grid needs at least one value");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= -0.5 || grid[i] >= 0.0) {
      die_usage(strprintf("--rho-grid entries must lie in (-0.5, 0); got %g",
                          grid[i]));
    }
    if (i > 0 && grid[i] >= grid[i - 1]) {
      die_usage("--rho-grid must decrease strictly toward -0.5");
    }
  }

  gt_series_params params;
  gt_series_params_default(&params);
  params.k_max = k_max;
  params.term_tol = term_tol;
  gt_quad_config cfg;
  gt_quad_config_default(&cfg);
  cfg.tol = tol;

  const int max_degree = 3;
  std::vector<double> f(grid.size()), f_err(grid.size());
  std::vector<double> degree_values(max_degree);
  double value = 0.0;
  double uncertainty = 0.0;
  int infinite = 0;
  int degrees_used = 0;
  unsigned long long evaluations = 0;
  require_ok(ctx, gt_mu23_extrapolated(ctx, grid.data(),
                                       static_cast<int>(grid.size()), &params,
                                       &cfg, max_degree, &value, &uncertainty,
                                       &infinite, f.data(), f_err.data(),
                                       degree_values.data(), &degrees_used,
                                       &evaluations));

  struct GridPoint {
    double rho;
    double series_value;
    double series_error;
    gt_estimate mc;
    Agreement agreement;
  };
  std::vector<GridPoint> points;
  for (size_t i = 0; i < grid.size(); ++i) {
    GridPoint point{};
    point.rho = grid[i];
    point.series_value = f[i];
    point.series_error = f_err[i];
    require_ok(ctx, gt_estimate_correlated_product(ctx, grid[i], samples, seed,
                                                   0, &point.mc));
    point.agreement =
        check_agreement(point.series_value, point.series_error,
                        point.mc.value, point.mc.stderr_estimate, tol);
    points.push_back(point);
  }

  gt_estimate direct{};
  require_ok(ctx,
             gt_estimate_correlated_product(ctx, -0.5, samples, seed, 0,
                                            &direct));
  const double extrap_error = infinite ? 0.0 : uncertainty;
  const Agreement direct_agreement = check_agreement(
      value, extrap_error, direct.value, direct.stderr_estimate, tol);

  gt_estimate at_zero{};
  require_ok(ctx, gt_estimate_correlated_product(ctx, 0.0, samples, seed, 0,
                                                 &at_zero));
  const double independent_product = std::pow(std::acos(-1.0), 1.5);
  const Agreement zero_agreement = check_agreement(
      independent_product, 0.0, at_zero.value, at_zero.stderr_estimate, tol);

  bool all_agree = direct_agreement.ok && zero_agreement.ok;
  for (const auto& point : points) all_agree = all_agree && point.agreement.ok;

  std::string text;
  if (format == "json") {
    ordered_json report;
    report["schema"] = "gtours-report-v1";
    report["command"] = "mu23";
    report["config"] = {{"rho_grid", grid},    {"samples", samples},
                        {"seed", seed},        {"tol", tol},
                        {"k_max", k_max},      {"term_tol", term_tol}};
    if (timestamp) report["timestamp"] = utc_timestamp();
    ordered_json rows = ordered_json::array();
    for (const auto& point : points) {
      rows.push_back({{"rho", point.rho},
                      {"series", {{"value", point.series_value},
                                  {"error", point.series_error}}},
                      {"monte_carlo", {{"value", point.mc.value},
                                       {"error", point.mc.stderr_estimate}}},
                      {"diff", point.agreement.diff},
                      {"window", point.agreement.window},
                      {"agree", point.agreement.ok}});
    }
    report["grid"] = std::move(rows);
    ordered_json extrapolation;
    extrapolation["degree_values"] = std::vector<double>(
        degree_values.begin(), degree_values.begin() + degrees_used);
    extrapolation["value"] = value;
    if (infinite) {
      extrapolation["uncertainty"] = nullptr;
    } else {
      extrapolation["uncertainty"] = uncertainty;
    }
    extrapolation["evaluations"] = evaluations;
    report["extrapolation"] = std::move(extrapolation);
    report["direct_monte_carlo"] = {{"value", direct.value},
                                    {"error", direct.stderr_estimate},
                                    {"diff", direct_agreement.diff},
                                    {"window", direct_agreement.window},
                                    {"agree", direct_agreement.ok}};
    report["independence_check"] = {{"exact", independent_product},
                                    {"value", at_zero.value},
                                    {"error", at_zero.stderr_estimate},
                                    {"diff", zero_agreement.diff},
                                    {"window", zero_agreement.window},
                                    {"agree", zero_agreement.ok}};
    report["all_agree"] = all_agree;
    text = report.dump(2) + "\n";
  } else if (format == "csv") {
    text =
        "kind,rho,series_value,series_error,mc_value,mc_error,diff,window,"
        "agree\n";
    for (const auto& point : points) {
      text += strprintf("grid,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                        point.rho, point.series_value, point.series_error,
                        point.mc.value, point.mc.stderr_estimate,
                        point.agreement.diff, point.agreement.window,
                        point.agreement.ok ? "true" : "false");
    }
    text += strprintf("extrapolation,-0.5,%.17g,%.17g,,,,,\n", value,
                      infinite ? std::numeric_limits<double>::quiet_NaN()
                               : uncertainty);
    text += strprintf("direct,-0.5,,,%.17g,%.17g,%.17g,%.17g,%s\n",
                      direct.value, direct.stderr_estimate,
                      direct_agreement.diff, direct_agreement.window,
                      direct_agreement.ok ? "true" : "false");
    text += strprintf("independence,0,%.17g,0,%.17g,%.17g,%.17g,%.17g,%s\n",
                      independent_product, at_zero.value,
                      at_zero.stderr_estimate, zero_agreement.diff,
                      zero_agreement.window,
                      zero_agreement.ok ? "true" : "false");
  } else {
    text = "three-step product F(rho), extrapolated to rho = -1/2\n\n";
    text += strprintf("%8s %16s %11s %16s %11s   %-4s\n", "rho", "series",
                      "+- err", "monte carlo", "+- stderr", "");
    for (const auto& point : points) {
      text += strprintf("%8.4f %16.10f %11.3e %16.10f %11.3e   %s\n",
                        point.rho, point.series_value, point.series_error,
                        point.mc.value, point.mc.stderr_estimate,
                        point.agreement.ok ? "ok" : "FAIL");
    }
    text += "\nextrapolation in u = rho + 1/2:\n";
    for (int degree = 0; degree < degrees_used; ++degree) {
      text += strprintf("  degree %d: %.10f\n", degree + 1,
                        degree_values[static_cast<size_t>(degree)]);
    }
    if (infinite) {
      text += strprintf("  value %.10f (uncertainty unavailable from a "
                        "single point)\n",
                        value);
    } else {
      text += strprintf("  value %.10f +- %.2e\n", value, uncertainty);
    }
    text += strprintf(
        "\ndirect monte carlo at rho = -1/2: %.6f +- %.3e  diff %.3e  window "
        "%.3e  %s\n",
        direct.value, direct.stderr_estimate, direct_agreement.diff,
        direct_agreement.window, direct_agreement.ok ? "ok" : "FAIL");
    text += strprintf(
        "independence check at rho = 0:    %.6f +- %.3e  vs %.6f  diff %.3e  "
        "window %.3e  %s\n",
        at_zero.value, at_zero.stderr_estimate, independent_product,
        zero_agreement.diff, zero_agreement.window,
        zero_agreement.ok ? "ok" : "FAIL");
  }
  write_output(text, out_path);
  return all_agree ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"expected step-length products of Gaussian tours"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gtours 0.1.0");
  app.footer(
      "GTOURS_THREADS caps the Monte Carlo worker count (default: hardware "
      "concurrency).\nEvery estimate is bit-identical for any worker count.");

  const std::vector<std::string> formats{"text", "json", "csv"};

  auto* table_cmd = app.add_subcommand("table", "print the exact-value catalogue");
  std::string table_format = "text";
  std::string table_out;
  bool table_timestamp = false;
  table_cmd->add_option("--format", table_format, "output format")
      ->check(CLI::IsMember(formats));
  table_cmd->add_option("--out", table_out, "write the report to a file");
  table_cmd->add_flag("--timestamp", table_timestamp,
                      "include the current UTC time in JSON output");

  auto* verify_cmd = app.add_subcommand(
      "verify", "cross-check exact and deterministic values against Monte Carlo");
  std::string verify_target = "all";
  double verify_samples = 1e6;
  unsigned long long verify_seed = kDefaultSeed;
  double verify_tol = 1e-8;
  std::string verify_format = "text";
  std::string verify_out;
  bool verify_timestamp = false;
  verify_cmd->add_option("target", verify_target,
                         "'all' or one symbol, e.g. mu_{1,3} or nu_2_3");
  verify_cmd->add_option("--samples", verify_samples, "Monte Carlo samples per check")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_seed, "Monte Carlo seed");
  verify_cmd->add_option("--tol", verify_tol, "relative agreement floor")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--format", verify_format, "output format")
      ->check(CLI::IsMember(formats));
  verify_cmd->add_option("--out", verify_out, "write the report to a file");
  verify_cmd->add_flag("--timestamp", verify_timestamp,
                       "include the current UTC time in JSON output");

  auto* estimate_cmd = app.add_subcommand(
      "estimate", "compute one quantity with the best available engine");
  int est_d = 0;
  int est_n = 0;
  bool est_closed = false;
  double est_samples = 1e8;
  unsigned long long est_seed = kDefaultSeed;
  double est_tol = 1e-8;
  std::string est_format = "text";
  std::string est_out;
  bool est_timestamp = false;
  estimate_cmd->add_option("--d", est_d, "dimension")
      ->required()
      ->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--n", est_n, "number of steps")
      ->required()
      ->check(CLI::PositiveNumber);
  estimate_cmd->add_flag("--closed", est_closed,
                         "closed tour (returns to the first point)");
  estimate_cmd
      ->add_option("--samples", est_samples,
                   "Monte Carlo samples when no exact engine applies")
      ->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--seed", est_seed, "Monte Carlo seed");
  estimate_cmd->add_option("--tol", est_tol, "quadrature relative tolerance")
      ->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--format", est_format, "output format")
      ->check(CLI::IsMember(formats));
  estimate_cmd->add_option("--out", est_out, "write the report to a file");
  estimate_cmd->add_flag("--timestamp", est_timestamp,
                         "include the current UTC time in JSON output");

  auto* mu23_cmd = app.add_subcommand(
      "mu23",
      "open three-step planar tour via correlated moments extrapolated to "
      "rho = -1/2");
  std::string mu23_grid = "-0.40,-0.43,-0.45,-0.47,-0.48";
  double mu23_samples = 1e7;
  unsigned long long mu23_seed = kDefaultSeed;
  double mu23_tol = 1e-8;
  int mu23_k_max = 80;
  double mu23_term_tol = 1e-10;
  std::string mu23_format = "text";
  std::string mu23_out;
  bool mu23_timestamp = false;
  mu23_cmd->add_option("--rho-grid", mu23_grid,
                       "comma-separated correlations, strictly decreasing "
                       "inside (-0.5, 0)");
  mu23_cmd->add_option("--samples", mu23_samples,
                       "Monte Carlo samples per cross-check")
      ->check(CLI::PositiveNumber);
  mu23_cmd->add_option("--seed", mu23_seed, "Monte Carlo seed");
  mu23_cmd->add_option("--tol", mu23_tol, "quadrature relative tolerance")
      ->check(CLI::PositiveNumber);
  mu23_cmd->add_option("--k-max", mu23_k_max, "Bessel series truncation order")
      ->check(CLI::PositiveNumber);
  mu23_cmd->add_option("--term-tol", mu23_term_tol,
                       "relative series term tolerance")
      ->check(CLI::PositiveNumber);
  mu23_cmd->add_option("--format", mu23_format, "output format")
      ->check(CLI::IsMember(formats));
  mu23_cmd->add_option("--out", mu23_out, "write the report to a file");
  mu23_cmd->add_flag("--timestamp", mu23_timestamp,
                     "include the current UTC time in JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Context context;
  if (*table_cmd) {
    return run_table(context.ptr, table_format, table_out, table_timestamp);
  }
  if (*verify_cmd) {
    return run_verify(context.ptr, verify_target,
                      static_cast<unsigned long long>(verify_samples),
                      verify_seed, verify_tol, verify_format, verify_out,
                      verify_timestamp);
  }
  if (*estimate_cmd) {
    return run_estimate(context.ptr, est_d, est_n, est_closed,
                        static_cast<unsigned long long>(est_samples), est_seed,
                        est_tol, est_format, est_out, est_timestamp);
  }
  return run_mu23(context.ptr, mu23_grid,
                  static_cast<unsigned long long>(mu23_samples), mu23_seed,
                  mu23_tol, mu23_k_max, mu23_term_tol, mu23_format, mu23_out,
                  mu23_timestamp);
}
