#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cwaft/curves.hpp"
#include "report.hpp"

namespace cwaft::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Maps every failure to an exit code so commands never throw.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const AllRestartsFailed& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kFitFailed;
  } catch (const TooFewSuccesses& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kFitFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
    return exit_code::kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return exit_code::kInternal;
  }
}

const char* strategy_name(InitStrategy s) {
  return s == InitStrategy::LabelSeeded ? "label" : "random";
}

Json fit_config_json(const FitOptions& o, const Table& table) {
  return {{"groups", table.data.causes()},
          {"epsilon", o.config.epsilon},
          {"max_iter", o.config.max_iter},
          {"restarts", o.config.n_restarts},
          {"variance_floor", o.config.variance_floor},
          {"init", strategy_name(o.config.strategy)},
          {"standardize", o.standardize}};
}

Table load_for_fit(const FitOptions& o, std::ostream& err) {
  if (o.groups && *o.groups < 1) throw InvalidArgument("--groups must be at least 1");
  o.config.validate();
  Table t = read_table(o.input, o.standardize, o.groups.value_or(0));
  for (const auto& w : t.warnings) err << "warning: " << w << '\n';
  return t;
}

void emit(const Json& report, const std::filesystem::path& path, std::ostream& out) {
  const std::string text = report.dump(2) + '\n';
  if (path.empty())
    out << text;
  else
    write_file(path, text);
}

void write_curve(const std::filesystem::path& path, const StepFunction& f, bool bands) {
  std::ostringstream s;
  s << (bands ? "time,value,lower,upper\n" : "time,value\n");
  for (std::size_t k = 0; k < f.times.size(); ++k) {
    s << format_double(f.times[k]) << ',' << format_double(f.values[k]);
    if (bands) s << ',' << format_double(f.lower[k]) << ',' << format_double(f.upper[k]);
    s << '\n';
  }
  write_file(path, s.str());
}

Eigen::VectorXd vector_from(const Json& a) {
  const auto v = a.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

int cmd_fit(const FitOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    const Table table = load_for_fit(opts, err);
    const FitResult result = fit(table.data, table.data.causes(), opts.config);
    const ModelScore s = score(result, table.data);
    if (!result.converged)
      err << "warning: no convergence within " << opts.config.max_iter << " iterations\n";
    Manifest m{"fit", opts.input.string(), opts.config.seed, fit_config_json(opts, table),
               seconds_since(start)};
    emit(fit_report(m, table, result, s), opts.output, out);
    return exit_code::kOk;
  });
}

int cmd_bootstrap(const BootstrapOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    if (opts.replicates < 2) throw InvalidArgument("--replicates must be at least 2");
    const Table table = load_for_fit(opts.fit, err);
    const int g = table.data.causes();
    const FitResult result = fit(table.data, g, opts.fit.config);
    const ModelScore s = score(result, table.data);
    const BootstrapReport boot =
        bootstrap_se(table.data, g, opts.fit.config, opts.replicates, opts.fit.config.threads);
    if (boot.n_failed > 0)
      err << "warning: " << boot.n_failed << " of " << boot.b << " replicates failed\n";
    Json config = fit_config_json(opts.fit, table);
    config["replicates"] = opts.replicates;
    Manifest m{"bootstrap", opts.fit.input.string(), opts.fit.config.seed, std::move(config),
               seconds_since(start)};
    emit(bootstrap_report(m, table, result, s, boot), opts.fit.output, out);
    return exit_code::kOk;
  });
}

std::vector<GroupSpec> read_scenario_groups(const std::filesystem::path& path) {
  const Json j = Json::parse(read_file(path));
  std::vector<GroupSpec> groups;
  for (const auto& g : j.at("groups")) {
    GroupSpec s;
    s.weight = g.at("weight").get<double>();
    s.mu = vector_from(g.at("mu"));
    const auto d = s.mu.size();
    const auto& rows = g.at("sigma_mat");
    if (static_cast<Eigen::Index>(rows.size()) != d)
      throw DimensionMismatch("scenario covariance has the wrong number of rows");
    s.sigma_mat.resize(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      const Eigen::VectorXd row = vector_from(rows.at(static_cast<std::size_t>(r)));
      if (row.size() != d) throw DimensionMismatch("scenario covariance row has the wrong length");
      s.sigma_mat.row(r) = row.transpose();
    }
    s.b0 = g.at("b0").get<double>();
    s.b = vector_from(g.at("b"));
    s.sigma2 = g.at("sigma2").get<double>();
    groups.push_back(std::move(s));
  }
  return groups;
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.output.empty()) throw InvalidArgument("--output is required");
    SimScenario s = reference_scenario();
    if (!opts.scenario_file.empty()) s.groups = read_scenario_groups(opts.scenario_file);
    s.n_total = opts.n_total;
    s.n_censored = opts.n_censored;
    s.censor_scale = opts.censor_scale;
    s.seed = opts.seed;
    const SimResult r = generate(s);

    std::vector<std::string> names;
    for (int j = 1; j <= r.data.dim(); ++j) names.push_back("x" + std::to_string(j));
    std::ostringstream data;
    write_table(data, r.data, names);
    write_file(opts.output, data.str());

    if (!opts.truth.empty()) {
      std::ostringstream truth;
      truth << "index,group,event_time\n";
      for (const auto& row : r.truth)
        truth << row.index << ',' << row.group << ',' << format_double(row.event_time) << '\n';
      write_file(opts.truth, truth.str());
    }
    return exit_code::kOk;
  });
}

int cmd_curves(const CurvesOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.grid_points < 1) throw InvalidArgument("--grid-points must be positive");
    if (opts.model.empty() || !std::filesystem::exists(opts.model))
      throw InvalidArgument("model report '" + opts.model.string() + "' not found");
    const Json report = Json::parse(read_file(opts.model));
    if (report.value("schema", "") != kReportSchema)
      throw InvalidArgument("'" + opts.model.string() + "' is not a " + kReportSchema + " report");
    const MixtureModel model = model_from_json(report);

    Table table = read_table(opts.input, false, model.size());
    if (table.covariates != covariates_from_json(report))
      throw SchemaError("input covariates differ from those of the fitted model", 1);
    // Curves are evaluated on the scale the model was fitted on.
    const Dataset data = [&] {
      const auto st = standardization_from_json(report);
      return st ? apply_standardization(table.data, *st) : table.data;
    }();

    std::filesystem::create_directories(opts.output_dir);
    const auto& dir = opts.output_dir;
    const auto grid = default_grid(data, opts.grid_points);
    write_curve(dir / "overall_survival.csv", overall_survival(model, data, grid), false);
    write_curve(dir / "km.csv", kaplan_meier(data), true);
    for (int g = 1; g <= model.size(); ++g) {
      const auto tag = std::to_string(g);
      write_curve(dir / ("cif_model_" + tag + ".csv"), model_cif(model, data, g, grid), false);
      write_curve(dir / ("cif_aj_" + tag + ".csv"), aalen_johansen_cif(data, g), false);
    }
    return exit_code::kOk;
  });
}

}  // namespace cwaft::cli
