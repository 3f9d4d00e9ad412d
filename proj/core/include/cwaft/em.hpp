#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "cwaft/model.hpp"

namespace cwaft {

// N x G posterior membership probabilities. Rows of observed failures are the
// exact indicator of their cause.
struct Responsibilities {
  Eigen::MatrixXd tau;
};

// Conditional first and second moments of the log-time per record and
// component. Rows of observed failures hold (y_i, y_i^2) in every column.
struct CensoredMoments {
  Eigen::MatrixXd ey;
  Eigen::MatrixXd ey2;
};

enum class InitStrategy { LabelSeeded, RandomSoft };

struct FitConfig {
  double epsilon = 1e-8;
  int max_iter = 2000;
  int n_restarts = 20;
  std::uint64_t seed = 0;
  double variance_floor = 1e-10;
  InitStrategy strategy = InitStrategy::LabelSeeded;
  // Worker threads for restarts; 0 picks the hardware concurrency.
  int threads = 0;

  void validate() const;
};

struct FitResult {
  MixtureModel model;
  std::vector<double> loglik_trace;
  int n_iter = 0;
  bool converged = false;
  Responsibilities responsibilities;
  int restart = 0;
  int n_failed_restarts = 0;

  double loglik() const { return loglik_trace.back(); }
};

double observed_loglik(const MixtureModel& model, const Dataset& data);

Responsibilities e_step_responsibilities(const MixtureModel& model, const Dataset& data);

CensoredMoments impute_censored_moments(const MixtureModel& model, const Dataset& data);

// Moments that treat each censoring time as if it were the event time. Used
// only to build the first parameter estimate from initial responsibilities.
CensoredMoments naive_moments(const Dataset& data, int n_components);

MixtureModel m_step(const Dataset& data, const Responsibilities& resp,
                    const CensoredMoments& moments, double variance_floor);

// Aitken-accelerated stopping rule on the last three log-likelihood values.
bool aitken_should_stop(double l_prev2, double l_prev, double l_curr, double epsilon);

Responsibilities initialize(const Dataset& data, int n_components, std::uint64_t seed,
                            InitStrategy strategy);

// One EM run from the given starting responsibilities.
FitResult run_em(const Dataset& data, const Responsibilities& start, const FitConfig& config);

// Best of config.n_restarts runs, restart r seeded with config.seed + r.
// Throws AllRestartsFailed when no run survives.
FitResult fit(const Dataset& data, int n_components, const FitConfig& config);

}  // namespace cwaft
