#include "cwaft/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cwaft/error.hpp"

namespace cwaft {

namespace {

constexpr double kBandZ = 1.959963984540054;

void check_grid(std::span<const double> grid) {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] > 0.0)) throw InvalidArgument("curve grid must be positive");
    if (k > 0 && !(grid[k] > grid[k - 1]))
      throw InvalidArgument("curve grid must be strictly increasing");
  }
}

void check_model(const MixtureModel& model, const Dataset& data) {
  if (model.dim() != data.dim())
    throw DimensionMismatch("model covariate dimension differs from the data");
}

// (1/N) sum_i S_g(t | x_i) on the grid.
std::vector<double> mean_component_survival(const ComponentParams& comp, const Dataset& data,
                                            std::span<const double> grid) {
  std::vector<double> out(grid.size(), 0.0);
  const auto& x = data.covariates();
  const double n = static_cast<double>(data.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Eigen::VectorXd xi = x.row(i).transpose();
    for (std::size_t k = 0; k < grid.size(); ++k)
      out[k] += conditional_survival_time(comp, xi, grid[k]);
  }
  for (auto& v : out) v /= n;
  return out;
}

// One row per distinct observed time, ascending.
struct TimeTally {
  double time;
  std::size_t at_risk;
  std::size_t events;
  std::vector<std::size_t> events_by_cause;  // index g-1
};

std::vector<TimeTally> tally(const Dataset& data) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return data.record(a).time < data.record(b).time;
  });

  std::vector<TimeTally> rows;
  std::size_t remaining = data.size();
  for (std::size_t k = 0; k < order.size();) {
    TimeTally row{data.record(order[k]).time, remaining, 0,
                  std::vector<std::size_t>(static_cast<std::size_t>(data.causes()), 0)};
    std::size_t j = k;
    for (; j < order.size() && data.record(order[j]).time == row.time; ++j) {
      const auto& st = data.record(order[j]).status;
      if (!st.is_censored()) {
        ++row.events;
        ++row.events_by_cause[static_cast<std::size_t>(st.cause() - 1)];
      }
    }
    remaining -= j - k;
    k = j;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

double StepFunction::operator()(double t) const {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return value_at_zero;
  return values[static_cast<std::size_t>(std::distance(times.begin(), it) - 1)];
}

std::vector<double> default_grid(const Dataset& data, int n_points) {
  if (n_points < 1) throw InvalidArgument("grid needs at least one point");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n_points) + data.size());
  double t_max = 0.0;
  for (const auto& r : data.records()) {
    t_max = std::max(t_max, r.time);
    grid.push_back(r.time);
  }
  const double step = 1.05 * t_max / n_points;
  for (int k = 1; k <= n_points; ++k) grid.push_back(step * k);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

StepFunction overall_survival(const MixtureModel& model, const Dataset& data,
                              std::span<const double> grid) {
  check_model(model, data);
  check_grid(grid);
  StepFunction out;
  out.times.assign(grid.begin(), grid.end());
  out.values.assign(grid.size(), 0.0);
  out.value_at_zero = 1.0;
  for (const auto& comp : model.components()) {
    const auto s = mean_component_survival(comp, data, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) out.values[k] += comp.pi * s[k];
  }
  return out;
}

StepFunction model_cif(const MixtureModel& model, const Dataset& data, int cause,
                       std::span<const double> grid) {
  check_model(model, data);
  if (cause < 1 || cause > model.size()) throw CauseOutOfRange(cause, model.size());
  check_grid(grid);
  const auto& comp = model.component(cause - 1);
  const auto s = mean_component_survival(comp, data, grid);
  StepFunction out;
  out.times.assign(grid.begin(), grid.end());
  out.values.resize(grid.size());
  out.value_at_zero = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) out.values[k] = comp.pi * (1.0 - s[k]);
  return out;
}

StepFunction kaplan_meier(const Dataset& data) {
  StepFunction out;
  out.value_at_zero = 1.0;
  double surv = 1.0;
  double greenwood = 0.0;
  for (const auto& row : tally(data)) {
    if (row.events == 0) continue;
    const double n = static_cast<double>(row.at_risk);
    const double d = static_cast<double>(row.events);
    surv *= 1.0 - d / n;
    if (row.at_risk > row.events) greenwood += d / (n * (n - d));

    out.times.push_back(row.time);
    out.values.push_back(surv);
    if (surv > 0.0) {
      out.variance.push_back(surv * surv * greenwood);
      const double se_lml = std::sqrt(greenwood) / std::abs(std::log(surv));
      out.lower.push_back(std::pow(surv, std::exp(kBandZ * se_lml)));
      out.upper.push_back(std::pow(surv, std::exp(-kBandZ * se_lml)));
    } else {
      out.variance.push_back(0.0);
      out.lower.push_back(0.0);
      out.upper.push_back(0.0);
    }
  }
  return out;
}

StepFunction aalen_johansen_cif(const Dataset& data, int cause) {
  if (cause < 1 || cause > data.causes()) throw CauseOutOfRange(cause, data.causes());
  StepFunction out;
  out.value_at_zero = 0.0;
  double surv_before = 1.0;
  double cif = 0.0;
  for (const auto& row : tally(data)) {
    if (row.events == 0) continue;
    const double n = static_cast<double>(row.at_risk);
    const double dg = static_cast<double>(row.events_by_cause[static_cast<std::size_t>(cause - 1)]);
    cif += surv_before * dg / n;
    surv_before *= 1.0 - static_cast<double>(row.events) / n;
    out.times.push_back(row.time);
    out.values.push_back(cif);
  }
  return out;
}

double cure_rate(const MixtureModel& model, const Dataset& data, int cause, double t0) {
  check_model(model, data);
  if (cause < 1 || cause > model.size()) throw CauseOutOfRange(cause, model.size());
  if (!(t0 > 0.0)) throw InvalidArgument("cure-rate horizon must be positive");
  const double t[] = {t0};
  const auto& comp = model.component(cause - 1);
  return comp.pi * mean_component_survival(comp, data, t).front();
}

}  // namespace cwaft
