#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "cwaft/bootstrap.hpp"
#include "cwaft/em.hpp"
#include "cwaft/selection.hpp"
#include "table.hpp"

namespace cwaft::cli {

inline constexpr const char* kReportSchema = "cwaft-report-v1";

using Json = nlohmann::ordered_json;

struct Manifest {
  std::string command;
  std::string input;
  std::uint64_t seed = 0;
  Json config = Json::object();
  double wall_time_seconds = 0.0;
};

Json manifest_json(const Manifest& m, const std::optional<Standardization>& standardization);

// One object per component, keyed by cause: pi, mu, sigma_mat (rows), b0, b, sigma2.
Json components_json(std::span<const ComponentParams> components);
MixtureModel model_from_json(const Json& report);

Json fit_report(const Manifest& manifest, const Table& table, const FitResult& result,
                const ModelScore& score);
// A fit report plus the bootstrap section with per-parameter standard errors.
Json bootstrap_report(const Manifest& manifest, const Table& table, const FitResult& result,
                      const ModelScore& score, const BootstrapReport& boot);

// Standardization recorded in a report, if any.
std::optional<Standardization> standardization_from_json(const Json& report);
std::vector<std::string> covariates_from_json(const Json& report);

}  // namespace cwaft::cli
