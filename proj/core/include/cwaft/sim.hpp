#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "cwaft/model.hpp"

namespace cwaft {

struct GroupSpec {
  double weight = 0.5;
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma_mat;
  double b0 = 0.0;
  Eigen::VectorXd b;
  double sigma2 = 1.0;
};

struct SimScenario {
  std::vector<GroupSpec> groups;
  int n_total = 500;
  int n_censored = 50;
  // Scale of the normal draw whose absolute value is subtracted from the
  // log-time of each censored record.
  double censor_scale = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

// Two groups, two covariates: means (0.5, 2.3) and (0.7, 1.8), diagonal
// covariances diag(0.05, 0.15) and diag(0.20, 0.20), intercepts 2 and 1.4,
// slopes (1.3, 0.8) and (1.4, 1.3), unit error variance, equal weights.
SimScenario reference_scenario();

struct TruthRow {
  std::size_t index;
  int group;  // 1-based
  double event_time;  // before censoring
};

struct SimResult {
  Dataset data;
  std::vector<TruthRow> truth;
};

SimResult generate(const SimScenario& scenario);

}  // namespace cwaft
