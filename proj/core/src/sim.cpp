#include "cwaft/sim.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cwaft/error.hpp"

namespace cwaft {

void SimScenario::validate() const {
  if (groups.empty()) throw InvalidArgument("scenario needs at least one group");
  const auto d = groups.front().mu.size();
  if (d < 1) throw InvalidArgument("scenario groups need at least one covariate");
  double total = 0.0;
  for (const auto& g : groups) {
    if (g.mu.size() != d || g.b.size() != d || g.sigma_mat.rows() != d || g.sigma_mat.cols() != d)
      throw DimensionMismatch("scenario groups disagree on the covariate dimension");
    if (!(g.weight > 0.0)) throw InvalidArgument("group weights must be positive");
    if (!(g.sigma2 > 0.0)) throw InvalidArgument("group error variance must be positive");
    total += g.weight;
  }
  if (std::abs(total - 1.0) > 1e-10) throw InvalidArgument("group weights must sum to one");
  if (n_total < 1) throw InvalidArgument("n_total must be positive");
  if (n_censored < 0 || n_censored > n_total)
    throw InvalidArgument("n_censored must lie in [0, n_total]");
  if (!(censor_scale > 0.0)) throw InvalidArgument("censor_scale must be positive");
}

SimScenario reference_scenario() {
  SimScenario s;
  GroupSpec g1;
  g1.weight = 0.5;
  g1.mu = Eigen::Vector2d(0.5, 2.3);
  g1.sigma_mat = Eigen::Vector2d(0.05, 0.15).asDiagonal();
  g1.b0 = 2.0;
  g1.b = Eigen::Vector2d(1.3, 0.8);
  g1.sigma2 = 1.0;

  GroupSpec g2;
  g2.weight = 0.5;
  g2.mu = Eigen::Vector2d(0.7, 1.8);
  g2.sigma_mat = Eigen::Vector2d(0.20, 0.20).asDiagonal();
  g2.b0 = 1.4;
  g2.b = Eigen::Vector2d(1.4, 1.3);
  g2.sigma2 = 1.0;

  s.groups = {g1, g2};
  return s;
}

SimResult generate(const SimScenario& scenario) {
  scenario.validate();
  const auto d = scenario.groups.front().mu.size();
  const auto n = static_cast<std::size_t>(scenario.n_total);

  std::vector<Eigen::MatrixXd> chol;
  std::vector<double> weights;
  for (const auto& g : scenario.groups) {
    Eigen::LLT<Eigen::MatrixXd> llt(g.sigma_mat);
    if (llt.info() != Eigen::Success)
      throw NonPositiveDefinite("scenario covariance is not positive definite");
    chol.push_back(llt.matrixL());
    weights.push_back(g.weight);
  }

  std::mt19937_64 rng(scenario.seed);
  std::discrete_distribution<int> pick_group(weights.begin(), weights.end());
  std::normal_distribution<double> std_normal(0.0, 1.0);

  std::vector<SurvivalRecord> records;
  std::vector<TruthRow> truth;
  records.reserve(n);
  truth.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int g = pick_group(rng);
    const auto& spec = scenario.groups[static_cast<std::size_t>(g)];
    Eigen::VectorXd w(d);
    for (Eigen::Index k = 0; k < d; ++k) w(k) = std_normal(rng);
    Eigen::VectorXd x = spec.mu + chol[static_cast<std::size_t>(g)] * w;
    const double y = spec.b0 + spec.b.dot(x) + std::sqrt(spec.sigma2) * std_normal(rng);
    const double t = std::exp(y);
    records.push_back({std::move(x), t, Status::failed(g + 1)});
    truth.push_back({i, g + 1, t});
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> chosen;
  std::sample(order.begin(), order.end(), std::back_inserter(chosen),
              static_cast<std::ptrdiff_t>(scenario.n_censored), rng);
  std::normal_distribution<double> shift(0.0, scenario.censor_scale);
  for (const auto i : chosen) {
    double v = 0.0;
    while (v == 0.0) v = std::abs(shift(rng));
    auto& r = records[i];
    r.time = std::exp(std::log(r.time) - v);
    r.status = Status::censored();
  }

  const int n_groups = static_cast<int>(scenario.groups.size());
  return {Dataset(std::move(records), n_groups), std::move(truth)};
}

}  // namespace cwaft
