#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "exitwalk/coeffs.hpp"
#include "exitwalk/gclass.hpp"
#include "exitwalk/woms.hpp"

namespace exitwalk::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3, kIoError = 4 };

struct EulerSettings {
  double h = 1e-4;
  bool bridge = true;
  double cap = 1e3;

  bool operator==(const EulerSettings&) const = default;
};

struct RunConfig {
  std::string preset = "bm";
  // Scalar preset parameters: alpha/beta/sigma for "constant" and "growth",
  // kappa/mu/sigma for "ou".
  double alpha = 0.0;
  double beta = 0.0;
  double sigma = 1.0;
  double kappa = 1.0;
  double mu = 0.0;

  double a = -1.0;
  double b = 1.0;
  double x0 = 0.0;
  double t0 = 0.0;
  double eps = 1e-2;
  double gamma = 1e-4;
  /// Horizon step; defaults to 1, or the closed-form value for "sinusoidal".
  std::optional<double> m;

  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  EulerSettings euler;
  std::optional<double> tmax;
  std::vector<double> eps_list;

  bool operator==(const RunConfig&) const = default;

  /// Throws ConfigError on unknown presets or violated problem constraints.
  void validate() const;
  bool is_growth() const { return preset == "growth"; }
  double effective_m() const;
};

/// Echo of the config (the output directory is not part of it).
nlohmann::json to_json(const RunConfig& cfg);
/// Fields absent from `j` keep the values of `base`. Unknown keys and an
/// "euler" section naming a different interval are rejected.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config(const std::string& path);

CoefficientSet make_coefficients(const RunConfig& cfg);
/// The L-class problem; for "growth" this is the log-space problem.
ExitProblem make_problem(const RunConfig& cfg);
GExitProblem make_growth_problem(const RunConfig& cfg);

/// samples.csv and report.json.
void cmd_sample(const RunConfig& cfg);
/// steps.csv and steps_fit.json.
void cmd_steps(const RunConfig& cfg);
/// compare.json and cdf.csv.
void cmd_compare(const RunConfig& cfg);
/// histogram.csv, steps.csv and demo_report.json for the sinusoidal example
/// on [-1, 2] from 1 with eps = 1e-2, gamma = 1e-4.
nlohmann::json cmd_demo_sinusoidal(const RunConfig& cfg, std::size_t n_steps_per_eps);

/// Parses argv and dispatches; returns the process exit code.
int main(int argc, const char* const* argv);

}  // namespace exitwalk::cli
