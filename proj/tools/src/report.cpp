#include "report.hpp"

namespace cwaft::cli {

namespace {

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_json(m.row(r).transpose()));
  return rows;
}

Eigen::VectorXd vector_from(const Json& a, Eigen::Index d) {
  if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != d)
    throw InvalidArgument("report vector has the wrong length");
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = a.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

Json data_json(const Table& table) {
  const auto& d = table.data;
  Json failed = Json::array();
  for (int g = 1; g <= d.causes(); ++g) failed.push_back(d.n_failed(g));
  return {{"n", d.size()},
          {"n_censored", d.n_censored()},
          {"n_failed", failed},
          {"causes", d.causes()},
          {"covariates", table.covariates}};
}

Json fit_section(const FitResult& r, const ModelScore& s) {
  return {{"loglik", s.loglik},
          {"k", s.k},
          {"aic", s.aic},
          {"bic", s.bic},
          {"iterations", r.n_iter},
          {"converged", r.converged},
          {"restart", r.restart},
          {"failed_restarts", r.n_failed_restarts},
          {"loglik_trace", r.loglik_trace}};
}

Json base_report(const char* kind, const Manifest& manifest, const Table& table,
                 const FitResult& result, const ModelScore& score) {
  Json j;
  j["schema"] = kReportSchema;
  j["kind"] = kind;
  j["manifest"] = manifest_json(manifest, table.standardization);
  j["warnings"] = table.warnings;
  j["data"] = data_json(table);
  j["model"] = {{"components", components_json(result.model.components())}};
  j["fit"] = fit_section(result, score);
  return j;
}

}  // namespace

Json manifest_json(const Manifest& m, const std::optional<Standardization>& standardization) {
  Json j;
  j["command"] = m.command;
  j["input"] = m.input;
  j["seed"] = m.seed;
  j["tool_version"] = CWAFT_VERSION;
  j["config"] = m.config;
  if (standardization)
    j["standardization"] = {{"center", standardization->center},
                            {"scale", standardization->scale}};
  else
    j["standardization"] = nullptr;
  j["wall_time_seconds"] = m.wall_time_seconds;
  return j;
}

Json components_json(std::span<const ComponentParams> components) {
  Json out = Json::array();
  int cause = 1;
  for (const auto& c : components)
    out.push_back({{"cause", cause++},
                   {"pi", c.pi},
                   {"mu", vector_json(c.mu)},
                   {"sigma_mat", matrix_json(c.sigma_mat)},
                   {"b0", c.b0},
                   {"b", vector_json(c.b)},
                   {"sigma2", c.sigma2}});
  return out;
}

MixtureModel model_from_json(const Json& report) {
  const auto& comps = report.at("model").at("components");
  if (!comps.is_array() || comps.empty()) throw InvalidArgument("report holds no components");
  const auto d = static_cast<Eigen::Index>(comps.front().at("mu").size());
  std::vector<ComponentParams> out;
  for (const auto& c : comps) {
    ComponentParams p;
    p.pi = c.at("pi").get<double>();
    p.mu = vector_from(c.at("mu"), d);
    const auto& rows = c.at("sigma_mat");
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != d)
      throw InvalidArgument("report covariance has the wrong shape");
    p.sigma_mat.resize(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
      p.sigma_mat.row(r) = vector_from(rows.at(static_cast<std::size_t>(r)), d).transpose();
    p.b0 = c.at("b0").get<double>();
    p.b = vector_from(c.at("b"), d);
    p.sigma2 = c.at("sigma2").get<double>();
    out.push_back(std::move(p));
  }
  return MixtureModel(std::move(out));
}

Json fit_report(const Manifest& manifest, const Table& table, const FitResult& result,
                const ModelScore& score) {
  return base_report("fit", manifest, table, result, score);
}

Json bootstrap_report(const Manifest& manifest, const Table& table, const FitResult& result,
                      const ModelScore& score, const BootstrapReport& boot) {
  Json j = base_report("bootstrap", manifest, table, result, score);
  j["bootstrap"] = {{"replicates", boot.b},
                    {"successful", boot.estimates.size()},
                    {"failed", boot.n_failed},
                    {"se", components_json(boot.se)}};
  return j;
}

std::optional<Standardization> standardization_from_json(const Json& report) {
  const auto& s = report.at("manifest").at("standardization");
  if (s.is_null()) return std::nullopt;
  return Standardization{s.at("center").get<std::vector<double>>(),
                         s.at("scale").get<std::vector<double>>()};
}

std::vector<std::string> covariates_from_json(const Json& report) {
  return report.at("data").at("covariates").get<std::vector<std::string>>();
}

}  // namespace cwaft::cli
