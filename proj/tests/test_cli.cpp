#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

using ordered_json = nlohmann::ordered_json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs the installed CLI through the shell, capturing stdout and stderr.
// env_prefix, when present, is prepended as VAR=value assignments.
RunResult run_cli(const std::string& arguments,
                  const std::string& env_prefix = "") {
  const std::string command = (env_prefix.empty() ? "" : env_prefix + " ") +
                              std::string(GTOURS_CLI_PATH) + " " + arguments +
                              " 2>&1";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  size_t got = 0;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
    result.output.append(buffer, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("table output in every format") {
  const RunResult text = run_cli("table");
  CHECK(text.exit_code == 0);
  const auto text_lines = lines_of(text.output);
  REQUIRE(text_lines.size() == 18);
  CHECK(text_lines[0].find("symbol") == 0);
  CHECK(text_lines[1].find("mu_{1,1}") == 0);

  const RunResult csv = run_cli("table --format csv");
  CHECK(csv.exit_code == 0);
  const auto csv_lines = lines_of(csv.output);
  REQUIRE(csv_lines.size() == 18);
  CHECK(csv_lines[0] == "symbol,d,n,topology,value,expression,provenance");

  const RunResult json = run_cli("table --format json");
  CHECK(json.exit_code == 0);
  const ordered_json report = ordered_json::parse(json.output);
  CHECK(report["schema"] == "gtours-report-v1");
  CHECK(report["command"] == "table");
  REQUIRE(report["entries"].size() == 17);
  CHECK(report["entries"][0]["symbol"] == "mu_{1,1}");
  CHECK(report["entries"][0]["value"].get<double>() ==
        doctest::Approx(1.1283791670955126).epsilon(1e-14));
  CHECK(report["entries"][16]["value"].get<double>() == 10.0);
}

TEST_CASE("verify single target") {
  const RunResult run = run_cli("verify nu_2_2 --samples 20000");
  CHECK(run.exit_code == 0);
  CHECK(run.output.find("nu_{2,2}") != std::string::npos);
  CHECK(run.output.find("1/1 checks agree") != std::string::npos);

  const RunResult braces = run_cli("verify 'nu_{2,2}' --samples 20000");
  CHECK(braces.exit_code == 0);
}

TEST_CASE("verify JSON round-trips byte for byte") {
  const RunResult run =
      run_cli("verify mu_1_2 --samples 20000 --format json");
  CHECK(run.exit_code == 0);
  const ordered_json report = ordered_json::parse(run.output);
  CHECK(report["schema"] == "gtours-report-v1");
  CHECK(report["config"]["samples"] == 20000);
  CHECK(report["config"]["seed"] == 20151217);
  REQUIRE(report["checks"].size() == 1);
  CHECK(report["checks"][0]["name"] == "mu_{1,2}");
  CHECK(report["checks"][0]["agree"] == true);
  CHECK(report["all_agree"] == true);
  CHECK(report.dump(2) + "\n" == run.output);
  // No timestamp unless requested.
  CHECK(!report.contains("timestamp"));

  const RunResult stamped =
      run_cli("verify mu_1_2 --samples 20000 --format json --timestamp");
  CHECK(ordered_json::parse(stamped.output).contains("timestamp"));
}

TEST_CASE("reruns are bit-identical across worker counts") {
  const std::string command =
      "verify nu_3_2 --samples 24576 --format json";
  const RunResult one = run_cli(command, "GTOURS_THREADS=1");
  REQUIRE(one.exit_code == 0);
  for (const char* env : {"GTOURS_THREADS=3", "GTOURS_THREADS=8", ""}) {
    const RunResult other = run_cli(command, env);
    CHECK(other.exit_code == 0);
    CHECK(other.output == one.output);
  }
}

TEST_CASE("estimate picks the strongest engine") {
  const RunResult exact = run_cli("estimate --d 2 --n 2 --format json");
  CHECK(exact.exit_code == 0);
  const ordered_json exact_report = ordered_json::parse(exact.output);
  CHECK(exact_report["engine"] == "exact");
  CHECK(exact_report["value"].get<double>() ==
        doctest::Approx(3.34122330513881).epsilon(1e-12));
  CHECK(exact_report["error"].get<double>() == 0.0);

  const RunResult quadrature =
      run_cli("estimate --d 3 --n 3 --closed --format json --tol 1e-6");
  CHECK(quadrature.exit_code == 0);
  const ordered_json quad_report = ordered_json::parse(quadrature.output);
  CHECK(quad_report["engine"] == "quadrature");
  CHECK(quad_report["value"].get<double>() ==
        doctest::Approx(12.708415614933918).epsilon(1e-5));

  const RunResult monte_carlo =
      run_cli("estimate --d 2 --n 4 --samples 50000 --format json");
  CHECK(monte_carlo.exit_code == 0);
  const ordered_json mc_report = ordered_json::parse(monte_carlo.output);
  CHECK(mc_report["engine"] == "monte-carlo");
  CHECK(mc_report["samples"] == 50000);
  CHECK(mc_report["value"].get<double>() > 9.0);
  CHECK(mc_report["value"].get<double>() < 15.0);
}

TEST_CASE("mu23 small run") {
  const RunResult run = run_cli(
      "mu23 --rho-grid ' -0.40,-0.45' --samples 20000 --tol 1e-4 "
      "--format json");
  CHECK(run.exit_code == 0);
  const ordered_json report = ordered_json::parse(run.output);
  CHECK(report["command"] == "mu23");
  REQUIRE(report["grid"].size() == 2);
  CHECK(report["grid"][0]["rho"].get<double>() == -0.40);
  CHECK(report["grid"][0]["agree"] == true);
  const double value = report["extrapolation"]["value"].get<double>();
  CHECK(value > 6.1);
  CHECK(value < 6.4);
  CHECK(report["direct_monte_carlo"]["agree"] == true);
  CHECK(report["independence_check"]["agree"] == true);
  CHECK(report["all_agree"] == true);
  CHECK(report.dump(2) + "\n" == run.output);
}

TEST_CASE("output lands in the requested file") {
  const std::string path = "/tmp/gtours_test_table.csv";
  std::remove(path.c_str());
  const RunResult run = run_cli("table --format csv --out " + path);
  CHECK(run.exit_code == 0);
  CHECK(run.output.empty());
  std::ifstream file(path);
  REQUIRE(file.good());
  std::stringstream content;
  content << file.rdbuf();
  const RunResult direct = run_cli("table --format csv");
  CHECK(content.str() == direct.output);
  std::remove(path.c_str());
}

TEST_CASE("usage and engine failures set distinct exit codes") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("bogus").exit_code == 2);
  CHECK(run_cli("estimate --d 2").exit_code == 2);
  CHECK(run_cli("estimate --d 2 --n 1 --closed").exit_code == 2);
  CHECK(run_cli("verify mu_9_9").exit_code == 2);
  CHECK(run_cli("verify mu_2_3").exit_code == 2);
  CHECK(run_cli("mu23 --rho-grid '-0.3,-0.2'").exit_code == 2);
  CHECK(run_cli("mu23 --rho-grid '-0.4,oops'").exit_code == 2);
  CHECK(run_cli("verify --format yaml").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("--version").exit_code == 0);

  // Starving the series of terms is an engine failure, not misuse.
  const RunResult starved =
      run_cli("mu23 --k-max 1 --rho-grid '-0.45' --samples 4096");
  CHECK(starved.exit_code == 3);
}
