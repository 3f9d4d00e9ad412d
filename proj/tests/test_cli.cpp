#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "report.hpp"
#include "table.hpp"
#include "test_support.hpp"

using namespace cwaft;
using namespace cwaft::cli;
namespace fs = std::filesystem;

namespace {

// Fresh directory under the system temp dir, removed on scope exit.
struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path = fs::temp_directory_path() / ("cwaft-" + tag + "-" + std::to_string(rng()));
    fs::create_directories(path);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path operator/(const std::string& name) const { return path / name; }
};

Json load_json(const fs::path& p) { return Json::parse(read_file(p)); }

Json without_timing(Json j) {
  j["manifest"].erase("wall_time_seconds");
  return j;
}

fs::path simulate_file(const ScratchDir& dir, int n, int nc, std::uint64_t seed) {
  SimulateOptions o;
  o.n_total = n;
  o.n_censored = nc;
  o.seed = seed;
  o.output = dir / ("sim" + std::to_string(seed) + ".csv");
  std::ostringstream err;
  REQUIRE(cmd_simulate(o, err) == exit_code::kOk);
  return o.output;
}

std::vector<std::string> csv_column(const fs::path& p, std::size_t col) {
  std::istringstream in(read_file(p));
  std::string line;
  std::getline(in, line);
  std::vector<std::string> out;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string field;
    for (std::size_t c = 0; c <= col; ++c) std::getline(ls, field, ',');
    out.push_back(field);
  }
  return out;
}

}  // namespace

TEST_CASE("reading tables") {
  SUBCASE("small valid file") {
    const auto t = parse_table("time,status,age,dose\n1.5,1,40,2\n2,0,51,1.25\n3e0,2,63,0\n", false);
    CHECK(t.data.size() == 3);
    CHECK(t.data.dim() == 2);
    CHECK(t.data.causes() == 2);
    CHECK(t.covariates == std::vector<std::string>{"age", "dose"});
    CHECK(t.data.record(1).status.is_censored());
    CHECK(t.data.record(2).covariates(0) == 63.0);
    CHECK(t.warnings.empty());
    CHECK_FALSE(t.standardization);
  }
  SUBCASE("largest label sets G; warnings only for causes without failures") {
    const auto t = parse_table("time,status,x\n1,1,0\n2,2,0\n3,4,0\n4,0,1\n", false);
    CHECK(t.data.causes() == 4);
    REQUIRE(t.warnings.size() == 1);
    CHECK(t.warnings[0].find("cause 3") != std::string::npos);
    const auto full = parse_table("time,status,x\n1,1,0\n2,2,0\n3,3,0\n3,4,0\n", false);
    CHECK(full.data.causes() == 4);
    CHECK(full.warnings.empty());
  }
  SUBCASE("declared cause count") {
    const auto t = parse_table("time,status,x\n1,1,0\n2,1,1\n", false, 3);
    CHECK(t.data.causes() == 3);
    CHECK(t.warnings.size() == 2);
    CHECK_THROWS_AS(parse_table("time,status,x\n1,1,0\n2,2,1\n", false, 1), SchemaError);
  }
  SUBCASE("line endings and blank tail") {
    const auto t = parse_table("time,status,x\r\n1,1,0.5\r\n2,0,1\r\n\n\n", false);
    CHECK(t.data.size() == 2);
    CHECK(t.data.record(0).covariates(0) == 0.5);
  }
  SUBCASE("nonpositive time names its line") {
    try {
      parse_table("time,status,x\n1,1,0\n0,1,0\n", false);
      FAIL("expected NonPositiveTime");
    } catch (const NonPositiveTime& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_table("time,status,x\n-2,1,0\n", false), NonPositiveTime);
  }
  SUBCASE("schema errors") {
    auto line_of = [](const std::string& text) -> std::size_t {
      try {
        parse_table(text, false);
      } catch (const SchemaError& e) {
        return e.line();
      }
      return 999;
    };
    CHECK(line_of("status,time,x\n1,1,0\n") == 1);
    CHECK(line_of("time,status\n1,1\n") == 1);
    CHECK(line_of("time,status,x,x\n1,1,0,0\n") == 1);
    CHECK(line_of("time,status,x\n1,1,0\n2,1\n") == 3);
    CHECK(line_of("time,status,x\n1,1,abc\n") == 2);
    CHECK(line_of("time,status,x\n1,1,nan\n") == 2);
    CHECK(line_of("time,status,x\n1,-1,0\n") == 2);
    CHECK(line_of("time,status,x\n1,1.5,0\n") == 2);
    CHECK(line_of("time,status,x\n1,1,0\n\n2,1,0\n") == 3);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(parse_table("", false), EmptyFile);
    CHECK_THROWS_AS(parse_table("time,status,x\n", false), EmptyFile);
  }
  SUBCASE("standardization") {
    const auto t = parse_table("time,status,x,y\n1,1,1,10\n2,1,2,20\n3,2,3,60\n4,0,6,30\n", true);
    REQUIRE(t.standardization);
    CHECK(t.standardization->center == std::vector<double>{3.0, 30.0});
    const Eigen::RowVectorXd mean = t.data.covariates().colwise().mean();
    CHECK(std::abs(mean(0)) < 1e-15);
    CHECK(std::abs(mean(1)) < 1e-15);
    const Eigen::RowVectorXd var = t.data.covariates().array().square().colwise().sum() / 3.0;
    CHECK(var(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(var(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(parse_table("time,status,x\n1,1,2\n2,1,2\n", true), InvalidArgument);
  }
}

TEST_CASE("writing tables") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(format_double(v)) == v);
  }
  const auto data = testing::small_sim(8, 40, 6);
  const std::vector<std::string> names{"a", "b"};
  std::ostringstream out;
  write_table(out, data, names);
  const std::string text = out.str();
  CHECK(text.rfind("time,status,a,b\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  const auto back = parse_table(text, false);
  CHECK(back.data.covariates() == data.covariates());
  CHECK(back.data.log_times() == data.log_times());
  for (std::size_t i = 0; i < data.size(); ++i) CHECK(back.data.record(i).status == data.record(i).status);
}

TEST_CASE("simulate command") {
  ScratchDir dir("sim");
  SUBCASE("defaults") {
    SimulateOptions o;
    o.output = dir / "a.csv";
    o.truth = dir / "truth.csv";
    std::ostringstream err;
    REQUIRE(cmd_simulate(o, err) == exit_code::kOk);
    const auto t = read_table(o.output, false);
    CHECK(t.data.size() == 500);
    CHECK(t.data.n_censored() == 50);
    CHECK(t.covariates == std::vector<std::string>{"x1", "x2"});
    CHECK(csv_column(o.truth, 0).size() == 500);

    SimulateOptions again = o;
    again.output = dir / "b.csv";
    again.truth = dir / "truth_b.csv";
    REQUIRE(cmd_simulate(again, err) == exit_code::kOk);
    CHECK(read_file(o.output) == read_file(again.output));
    CHECK(read_file(o.truth) == read_file(again.truth));
    again.seed = 1;
    REQUIRE(cmd_simulate(again, err) == exit_code::kOk);
    CHECK(read_file(o.output) != read_file(again.output));
  }
  SUBCASE("scenario file") {
    write_file(dir / "s.json", R"({"groups": [
      {"weight": 0.25, "mu": [1], "sigma_mat": [[0.5]], "b0": 1, "b": [0.5], "sigma2": 0.5},
      {"weight": 0.25, "mu": [0], "sigma_mat": [[1]], "b0": 2, "b": [-1], "sigma2": 1},
      {"weight": 0.5, "mu": [-1], "sigma_mat": [[2]], "b0": 0.5, "b": [0], "sigma2": 2}]})");
    SimulateOptions o;
    o.scenario_file = dir / "s.json";
    o.n_total = 300;
    o.n_censored = 0;
    o.output = dir / "three.csv";
    std::ostringstream err;
    REQUIRE(cmd_simulate(o, err) == exit_code::kOk);
    const auto t = read_table(o.output, false);
    CHECK(t.data.causes() == 3);
    CHECK(t.data.dim() == 1);
  }
  SUBCASE("invalid scenario") {
    SimulateOptions o;
    o.n_censored = 501;
    o.output = dir / "x.csv";
    std::ostringstream err;
    CHECK(cmd_simulate(o, err) == exit_code::kUsage);
    CHECK_FALSE(err.str().empty());
  }
}

TEST_CASE("fit command") {
  ScratchDir dir("fit");
  const auto data = simulate_file(dir, 200, 20, 11);
  FitOptions o;
  o.input = data;
  o.config.n_restarts = 3;
  o.config.seed = 4;
  o.output = dir / "r.json";
  std::ostringstream out, err;

  SUBCASE("report contents") {
    REQUIRE(cmd_fit(o, out, err) == exit_code::kOk);
    const auto r = load_json(o.output);
    CHECK(r["schema"] == "cwaft-report-v1");
    CHECK(r["kind"] == "fit");
    CHECK(r["fit"]["k"] == 19);
    CHECK(r["data"]["n"] == 200);
    CHECK(r["data"]["n_censored"] == 20);
    CHECK(r["model"]["components"].size() == 2);
    CHECK(r["manifest"]["seed"] == 4);
    CHECK(r["manifest"]["config"]["restarts"] == 3);

    // The report reproduces the library fit exactly.
    const auto t = read_table(data, false);
    const auto direct = fit(t.data, 2, o.config);
    CHECK(flatten(model_from_json(r)) == flatten(direct.model));
    CHECK(r["fit"]["loglik"].get<double>() == direct.loglik());
    const double aic = r["fit"]["aic"].get<double>();
    const double bic = r["fit"]["bic"].get<double>();
    CHECK(bic - aic == doctest::Approx(19 * (std::log(200.0) - 2.0)).epsilon(1e-12));
  }
  SUBCASE("deterministic apart from timing") {
    REQUIRE(cmd_fit(o, out, err) == exit_code::kOk);
    FitOptions again = o;
    again.output = dir / "again.json";
    again.config.threads = 1;
    REQUIRE(cmd_fit(again, out, err) == exit_code::kOk);
    CHECK(without_timing(load_json(o.output)) == without_timing(load_json(again.output)));
  }
  SUBCASE("standard output when no path is given") {
    o.output.clear();
    REQUIRE(cmd_fit(o, out, err) == exit_code::kOk);
    CHECK(Json::parse(out.str())["schema"] == "cwaft-report-v1");
  }
  SUBCASE("usage errors exit 2") {
    o.groups = 0;
    CHECK(cmd_fit(o, out, err) == exit_code::kUsage);
    o.groups.reset();
    o.config.max_iter = 2;
    CHECK(cmd_fit(o, out, err) == exit_code::kUsage);
    o.config.max_iter = 100;
    o.input = dir / "missing.csv";
    CHECK(cmd_fit(o, out, err) == exit_code::kUsage);
    write_file(dir / "bad.csv", "time,status,x\n1,1,zz\n");
    o.input = dir / "bad.csv";
    err.str("");
    CHECK(cmd_fit(o, out, err) == exit_code::kUsage);
    CHECK(err.str().find("line 2") != std::string::npos);
    CHECK_FALSE(fs::exists(o.output));
  }
  SUBCASE("every restart failing exits 3") {
    // Cause 1 has a single covariate value, so its covariance is singular.
    std::ostringstream csv;
    csv << "time,status,x\n";
    for (int i = 0; i < 10; ++i) csv << 1.0 + 0.37 * i << ",1,1\n";
    for (int i = 0; i < 10; ++i) csv << 2.0 + 0.41 * i << ",2," << 0.3 * i - 1.0 << '\n';
    write_file(dir / "singular.csv", csv.str());
    o.input = dir / "singular.csv";
    CHECK(cmd_fit(o, out, err) == exit_code::kFitFailed);
  }
  SUBCASE("declaring more causes than observed warns") {
    o.groups = 3;
    o.config.n_restarts = 1;
    const int code = cmd_fit(o, out, err);
    CHECK((code == exit_code::kOk || code == exit_code::kFitFailed));
    CHECK(err.str().find("cause 3 has no observed failures") != std::string::npos);
  }
}

TEST_CASE("bootstrap command") {
  ScratchDir dir("boot");
  std::ostringstream out, err;
  SUBCASE("report with standard errors") {
    BootstrapOptions o;
    o.fit.input = simulate_file(dir, 150, 15, 2);
    o.fit.config.n_restarts = 2;
    o.fit.config.seed = 70;
    o.replicates = 4;
    o.fit.output = dir / "b.json";
    REQUIRE(cmd_bootstrap(o, out, err) == exit_code::kOk);
    const auto r = load_json(o.fit.output);
    CHECK(r["kind"] == "bootstrap");
    CHECK(r["bootstrap"]["replicates"] == 4);
    CHECK(r["bootstrap"]["successful"].get<int>() + r["bootstrap"]["failed"].get<int>() == 4);
    const auto t = read_table(o.fit.input, false);
    const auto direct = bootstrap_se(t.data, 2, o.fit.config, 4, 1);
    CHECK(r["bootstrap"]["se"][0]["pi"].get<double>() == direct.se[0].pi);
    CHECK(r["bootstrap"]["se"][1]["b"][1].get<double>() == direct.se[1].b(1));
  }
  SUBCASE("too few successful replicates exits 3") {
    // Cause 1 has one distinct covariate value among ten; a replicate that
    // misses it has a singular covariance for that cause.
    std::ostringstream csv;
    csv << "time,status,x\n";
    for (int i = 0; i < 10; ++i) csv << 1.0 + 0.37 * i << ",1," << (i == 0 ? 2 : 1) << '\n';
    for (int i = 0; i < 10; ++i) csv << 2.0 + 0.41 * i << ",2," << 0.3 * i - 1.0 << '\n';
    write_file(dir / "fragile.csv", csv.str());
    BootstrapOptions o;
    o.fit.input = dir / "fragile.csv";
    o.fit.config.n_restarts = 1;
    o.fit.output = dir / "f.json";
    o.replicates = 2;
    const auto t = read_table(o.fit.input, false);
    int exits_3 = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      o.fit.config.seed = seed;
      bool too_few = false;
      try {
        bootstrap_se(t.data, 2, o.fit.config, 2, 1);
      } catch (const TooFewSuccesses&) {
        too_few = true;
      }
      const int code = cmd_bootstrap(o, out, err);
      CHECK(code == (too_few ? exit_code::kFitFailed : exit_code::kOk));
      exits_3 += code == exit_code::kFitFailed;
    }
    CHECK(exits_3 > 0);
  }
  SUBCASE("replicates below two is a usage error") {
    BootstrapOptions o;
    o.fit.input = simulate_file(dir, 150, 15, 2);
    o.replicates = 1;
    CHECK(cmd_bootstrap(o, out, err) == exit_code::kUsage);
  }
}

TEST_CASE("curves command") {
  ScratchDir dir("curves");
  std::ostringstream out, err;

  SUBCASE("fitted model: six files, limits and grid size") {
    const auto data = simulate_file(dir, 200, 20, 5);
    FitOptions f;
    f.input = data;
    f.config.n_restarts = 2;
    f.output = dir / "r.json";
    REQUIRE(cmd_fit(f, out, err) == exit_code::kOk);
    CurvesOptions c;
    c.input = data;
    c.model = f.output;
    c.output_dir = dir / "out";
    REQUIRE(cmd_curves(c, err) == exit_code::kOk);
    std::size_t n_files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(c.output_dir)) ++n_files;
    CHECK(n_files == 6);
    for (const char* name : {"overall_survival.csv", "km.csv", "cif_model_1.csv", "cif_model_2.csv",
                             "cif_aj_1.csv", "cif_aj_2.csv"})
      CHECK(fs::exists(c.output_dir / name));
    const auto t = read_table(data, false);
    std::set<double> distinct;
    for (const auto& r : t.data.records()) distinct.insert(r.time);
    CHECK(csv_column(c.output_dir / "overall_survival.csv", 0).size() <= 200 + distinct.size());
    CHECK(read_file(c.output_dir / "km.csv").rfind("time,value,lower,upper\n", 0) == 0);
  }

  SUBCASE("km on the three-event toy") {
    write_file(dir / "toy.csv", "time,status,x\n1,1,0\n2,1,0\n3,1,0\n");
    const MixtureModel m({testing::component(1.0, Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), 0.5,
                                        Eigen::VectorXd::Zero(1), 1.0)});
    Json report;
    report["schema"] = kReportSchema;
    report["manifest"] = manifest_json(Manifest{}, std::nullopt);
    report["data"] = {{"covariates", Json::array({"x"})}};
    report["model"] = {{"components", components_json(m.components())}};
    write_file(dir / "toy.json", report.dump());
    CurvesOptions c;
    c.input = dir / "toy.csv";
    c.model = dir / "toy.json";
    c.output_dir = dir / "toy";
    c.grid_points = 10;
    REQUIRE(cmd_curves(c, err) == exit_code::kOk);
    const auto values = csv_column(c.output_dir / "km.csv", 1);
    REQUIRE(values.size() == 3);
    CHECK(std::stod(values[0]) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(std::stod(values[1]) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(std::stod(values[2]) == 0.0);
    CHECK(std::stod(csv_column(c.output_dir / "cif_aj_1.csv", 1).back()) == doctest::Approx(1.0).epsilon(1e-15));
  }

  SUBCASE("standardized fits are evaluated on the fitted scale") {
    const auto data = simulate_file(dir, 200, 20, 6);
    FitOptions f;
    f.input = data;
    f.standardize = true;
    f.config.n_restarts = 2;
    f.output = dir / "s.json";
    REQUIRE(cmd_fit(f, out, err) == exit_code::kOk);
    CurvesOptions c;
    c.input = data;
    c.model = f.output;
    c.output_dir = dir / "std";
    REQUIRE(cmd_curves(c, err) == exit_code::kOk);
    const auto report = load_json(f.output);
    const auto st = read_table(data, true);
    const auto g = default_grid(st.data, 200);
    const auto curve = overall_survival(model_from_json(report), st.data, g);
    const auto written = csv_column(c.output_dir / "overall_survival.csv", 1);
    REQUIRE(written.size() == curve.values.size());
    for (std::size_t k = 0; k < written.size(); ++k) CHECK(std::stod(written[k]) == curve.values[k]);
  }

  SUBCASE("errors exit 2") {
    const auto data = simulate_file(dir, 100, 10, 7);
    CurvesOptions c;
    c.input = data;
    c.model = dir / "absent.json";
    c.output_dir = dir / "none";
    CHECK(cmd_curves(c, err) == exit_code::kUsage);
    write_file(dir / "junk.json", "{\"schema\": \"other\"}");
    c.model = dir / "junk.json";
    CHECK(cmd_curves(c, err) == exit_code::kUsage);
    write_file(dir / "other.csv", "time,status,p,q\n1,1,0,0\n2,2,1,1\n");
    FitOptions f;
    f.input = data;
    f.config.n_restarts = 1;
    f.output = dir / "m.json";
    REQUIRE(cmd_fit(f, out, err) == exit_code::kOk);
    c.model = f.output;
    c.input = dir / "other.csv";
    CHECK(cmd_curves(c, err) == exit_code::kUsage);
  }
}
