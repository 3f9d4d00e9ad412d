#include <CLI11.hpp>
#include <iostream>
#include <map>

#include "commands.hpp"

namespace {

using namespace cwaft::cli;

void add_fit_flags(CLI::App& cmd, FitOptions& o) {
  cmd.add_option("-i,--input", o.input, "CSV with columns time,status,<covariates>")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("-g,--groups", o.groups, "Number of causes G (default: largest status label)")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--epsilon", o.config.epsilon, "Aitken stopping tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--max-iter", o.config.max_iter, "Iteration cap per restart")
      ->capture_default_str()
      ->check(CLI::Range(3, 1'000'000));
  cmd.add_option("--restarts", o.config.n_restarts, "Independent EM restarts")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--seed", o.config.seed, "Base random seed")->capture_default_str();
  cmd.add_option("--variance-floor", o.config.variance_floor, "Lower bound on sigma2")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  const std::map<std::string, cwaft::InitStrategy> inits{
      {"label", cwaft::InitStrategy::LabelSeeded}, {"random", cwaft::InitStrategy::RandomSoft}};
  cmd.add_option("--init", o.config.strategy, "Initialization: label or random")
      ->transform(CLI::CheckedTransformer(inits, CLI::ignore_case));
  cmd.add_option("--threads", o.config.threads, "Worker threads (0 = all cores)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd.add_flag("--standardize", o.standardize, "Center and scale covariates before fitting");
  cmd.add_option("-o,--output", o.output, "Report path (default: standard output)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixtures of log-normal AFT regressions for competing risks"};
  app.set_version_flag("--version", CWAFT_VERSION);
  app.require_subcommand(1);

  FitOptions fit_opts;
  auto* fit = app.add_subcommand("fit", "Fit the mixture and write a JSON report");
  add_fit_flags(*fit, fit_opts);

  BootstrapOptions boot_opts;
  auto* boot = app.add_subcommand("bootstrap", "Fit plus stratified bootstrap standard errors");
  add_fit_flags(*boot, boot_opts.fit);
  boot->add_option("-b,--replicates", boot_opts.replicates, "Bootstrap replicates")
      ->capture_default_str()
      ->check(CLI::Range(2, 1'000'000));

  SimulateOptions sim_opts;
  auto* sim = app.add_subcommand("simulate", "Generate data from a two-group scenario");
  sim->add_option("-o,--output", sim_opts.output, "Data CSV")->required();
  sim->add_option("--truth", sim_opts.truth, "Side CSV with true groups and event times");
  sim->add_option("--scenario", sim_opts.scenario_file, "JSON file replacing the default groups")
      ->check(CLI::ExistingFile);
  sim->add_option("-n,--n-total", sim_opts.n_total, "Records")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim->add_option("-c,--n-censored", sim_opts.n_censored, "Censored records")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  sim->add_option("--censor-scale", sim_opts.censor_scale,
                  "Scale of the normal shift subtracted from censored log-times")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_opts.seed, "Random seed")->capture_default_str();

  CurvesOptions curve_opts;
  auto* curves = app.add_subcommand("curves", "Write model and nonparametric curves as CSV");
  curves->add_option("-i,--input", curve_opts.input, "Data CSV")
      ->required()
      ->check(CLI::ExistingFile);
  curves->add_option("-m,--model", curve_opts.model, "Report from fit or bootstrap")->required();
  curves->add_option("--grid-points", curve_opts.grid_points, "Evenly spaced grid points")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  curves->add_option("-d,--output-dir", curve_opts.output_dir, "Directory for the CSV files")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_code::kOk : exit_code::kUsage;
  }

  if (*fit) return cmd_fit(fit_opts, std::cout, std::cerr);
  if (*boot) return cmd_bootstrap(boot_opts, std::cout, std::cerr);
  if (*sim) return cmd_simulate(sim_opts, std::cerr);
  return cmd_curves(curve_opts, std::cerr);
}
