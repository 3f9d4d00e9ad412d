#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "cwaft/em.hpp"
#include "cwaft/sim.hpp"

namespace cwaft::cli {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
// Malformed input, bad flags, missing files.
inline constexpr int kUsage = 2;
// AllRestartsFailed or TooFewSuccesses.
inline constexpr int kFitFailed = 3;
}  // namespace exit_code

struct FitOptions {
  std::filesystem::path input;
  // Unset: the largest status label in the input.
  std::optional<int> groups;
  FitConfig config;
  bool standardize = false;
  // Empty: write the report to `out`.
  std::filesystem::path output;
};

struct BootstrapOptions {
  FitOptions fit;
  int replicates = 100;
};

struct SimulateOptions {
  // Groups replace those of the reference scenario when set (JSON file).
  std::filesystem::path scenario_file;
  int n_total = 500;
  int n_censored = 50;
  double censor_scale = 0.5;
  std::uint64_t seed = 0;
  std::filesystem::path output;
  std::filesystem::path truth;
};

struct CurvesOptions {
  std::filesystem::path input;
  std::filesystem::path model;
  int grid_points = 200;
  std::filesystem::path output_dir;
};

// Each command returns an exit code; diagnostics go to `err`.
int cmd_fit(const FitOptions& opts, std::ostream& out, std::ostream& err);
int cmd_bootstrap(const BootstrapOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& err);
int cmd_curves(const CurvesOptions& opts, std::ostream& err);

// Reads the groups of a scenario file:
// {"groups": [{"weight", "mu", "sigma_mat", "b0", "b", "sigma2"}, ...]}
std::vector<GroupSpec> read_scenario_groups(const std::filesystem::path& path);

}  // namespace cwaft::cli
