#pragma once

#include <span>
#include <vector>

#include "cwaft/model.hpp"

namespace cwaft {

// Right-continuous piecewise-constant curve: value_at_zero before the first
// knot, values[k] on [times[k], times[k+1]). Optional pointwise bands share
// the knots.
struct StepFunction {
  std::vector<double> times;
  std::vector<double> values;
  double value_at_zero = 0.0;
  std::vector<double> variance;
  std::vector<double> lower;
  std::vector<double> upper;

  double operator()(double t) const;
  bool has_bands() const noexcept { return !lower.empty(); }
};

// n_points equally spaced times on (0, 1.05 * max time] merged with every
// distinct observed time.
std::vector<double> default_grid(const Dataset& data, int n_points = 200);

// Population-averaged mixture survival: (1/N) sum_i sum_g pi_g S_g(t | x_i).
StepFunction overall_survival(const MixtureModel& model, const Dataset& data,
                              std::span<const double> grid);

// pi_g (1 - (1/N) sum_i S_g(t | x_i)) for cause g (1-based).
StepFunction model_cif(const MixtureModel& model, const Dataset& data, int cause,
                       std::span<const double> grid);

/// All-cause product-limit estimate over distinct event times, with Greenwood
/// variance and 95% log-minus-log pointwise bands. Events at a tied time are
/// removed from the risk set before censorings at that time.
StepFunction kaplan_meier(const Dataset& data);

/// Aalen-Johansen cumulative incidence of cause g (1-based):
/// sum over event times t_j <= t of S(t_j-) d_gj / n_j, with S the all-cause
/// Kaplan-Meier estimate. Knots are the distinct event times of any cause.
StepFunction aalen_johansen_cif(const Dataset& data, int cause);

// pi_g * (1/N) sum_i S_g(t0 | x_i): the fraction never failing from cause g.
double cure_rate(const MixtureModel& model, const Dataset& data, int cause, double t0);

}  // namespace cwaft
