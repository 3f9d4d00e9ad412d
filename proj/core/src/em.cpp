#include "cwaft/em.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "cwaft/error.hpp"
#include "cwaft/numerics.hpp"
#include "cwaft/parallel.hpp"

namespace cwaft {

namespace {

void check_compatible(const MixtureModel& model, const Dataset& data) {
  if (model.dim() != data.dim())
    throw DimensionMismatch("model covariate dimension differs from the data");
  if (model.size() != data.causes())
    throw DimensionMismatch("model component count differs from the number of causes");
}

std::vector<GaussianDensity> covariate_densities(const MixtureModel& model) {
  std::vector<GaussianDensity> out;
  out.reserve(static_cast<std::size_t>(model.size()));
  for (const auto& c : model.components()) out.emplace_back(c.mu, c.sigma_mat);
  return out;
}

// log pi_g + log S_g(y*|x) + log phi_d(x) for every component of one censored row.
Eigen::VectorXd censored_log_weights(const MixtureModel& model,
                                     const std::vector<GaussianDensity>& densities,
                                     const Eigen::Ref<const Eigen::VectorXd>& x, double y) {
  Eigen::VectorXd w(model.size());
  for (int g = 0; g < model.size(); ++g) {
    const auto& c = model.component(g);
    w(g) = std::log(c.pi) + cond_log_survival(c, x, y) + densities[g].log_pdf(x);
  }
  return w;
}

}  // namespace

void FitConfig::validate() const {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (max_iter < 3) throw InvalidArgument("max_iter must be at least 3");
  if (n_restarts < 1) throw InvalidArgument("n_restarts must be positive");
  if (!(variance_floor > 0.0)) throw InvalidArgument("variance_floor must be positive");
}

double observed_loglik(const MixtureModel& model, const Dataset& data) {
  check_compatible(model, data);
  const auto densities = covariate_densities(model);
  const auto& x = data.covariates();
  const auto& y = data.log_times();
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Eigen::VectorXd xi = x.row(i).transpose();
    const auto row = static_cast<std::size_t>(i);
    if (data.censored(row)) {
      total += log_sum_exp(censored_log_weights(model, densities, xi, y(i)));
    } else {
      const int g = data.cause(row) - 1;
      const auto& c = model.component(g);
      total += cond_log_density(c, xi, y(i)) + densities[g].log_pdf(xi) + std::log(c.pi);
    }
  }
  return total;
}

Responsibilities e_step_responsibilities(const MixtureModel& model, const Dataset& data) {
  check_compatible(model, data);
  const auto densities = covariate_densities(model);
  const auto& x = data.covariates();
  const auto& y = data.log_times();
  Eigen::MatrixXd tau = Eigen::MatrixXd::Zero(x.rows(), model.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const auto row = static_cast<std::size_t>(i);
    if (!data.censored(row)) {
      tau(i, data.cause(row) - 1) = 1.0;
      continue;
    }
    const Eigen::VectorXd w = censored_log_weights(model, densities, x.row(i).transpose(), y(i));
    const double norm = log_sum_exp(w);
    if (!std::isfinite(norm)) throw DegenerateRow(row);
    tau.row(i) = (w.array() - norm).exp().transpose();
  }
  return {std::move(tau)};
}

CensoredMoments impute_censored_moments(const MixtureModel& model, const Dataset& data) {
  check_compatible(model, data);
  const auto& x = data.covariates();
  const auto& y = data.log_times();
  const auto n = x.rows();
  CensoredMoments m{Eigen::MatrixXd(n, model.size()), Eigen::MatrixXd(n, model.size())};
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!data.censored(static_cast<std::size_t>(i))) {
      m.ey.row(i).setConstant(y(i));
      m.ey2.row(i).setConstant(y(i) * y(i));
      continue;
    }
    for (int g = 0; g < model.size(); ++g) {
      const auto& c = model.component(g);
      const double mean = linear_predictor(c, x.row(i).transpose());
      const double sd = std::sqrt(c.sigma2);
      m.ey(i, g) = trunc_normal_mean(mean, sd, y(i));
      m.ey2(i, g) = trunc_normal_second_moment(mean, sd, y(i));
    }
  }
  return m;
}

CensoredMoments naive_moments(const Dataset& data, int n_components) {
  const auto& y = data.log_times();
  CensoredMoments m{y.replicate(1, n_components), y.array().square().matrix().replicate(1, n_components)};
  return m;
}

MixtureModel m_step(const Dataset& data, const Responsibilities& resp,
                    const CensoredMoments& moments, double variance_floor) {
  const auto& x = data.covariates();
  const auto& tau = resp.tau;
  const auto n = x.rows();
  const int d = data.dim();
  const auto n_comp = static_cast<int>(tau.cols());
  if (tau.rows() != n || moments.ey.rows() != n || moments.ey2.rows() != n ||
      moments.ey.cols() != n_comp || moments.ey2.cols() != n_comp)
    throw DimensionMismatch("responsibility and moment matrices must be N x G");

  std::vector<ComponentParams> comps;
  comps.reserve(static_cast<std::size_t>(n_comp));
  for (int g = 0; g < n_comp; ++g) {
    const Eigen::VectorXd w = tau.col(g);
    const double mass = w.sum();
    if (!(mass > d * std::numeric_limits<double>::epsilon())) throw EmptyComponent(g + 1);

    ComponentParams c;
    c.pi = mass / static_cast<double>(n);
    c.mu = (x.transpose() * w) / mass;

    const Eigen::MatrixXd centered = x.rowwise() - c.mu.transpose();
    const Eigen::MatrixXd scatter =
        (centered.transpose() * w.asDiagonal() * centered) / mass;
    try {
      c.sigma_mat = regularize_spd(scatter);
    } catch (const NonPositiveDefinite&) {
      throw SingularDesign(g + 1);
    }

    // Weighted normal equations, centered form: b solves Sxx b = Sxy with the
    // intercept recovered from the weighted means.
    const Eigen::VectorXd ey = moments.ey.col(g);
    const double ybar = w.dot(ey) / mass;
    const Eigen::VectorXd sxy =
        centered.transpose() * (w.array() * (ey.array() - ybar)).matrix() / mass;
    Eigen::LLT<Eigen::MatrixXd> llt(c.sigma_mat);
    c.b = llt.solve(sxy);
    if (!c.b.allFinite()) throw SingularDesign(g + 1);
    c.b0 = ybar - c.b.dot(c.mu);

    // E[(y - m)^2] = (E y - m)^2 + (E y^2 - (E y)^2)
    const Eigen::ArrayXd fitted = (x * c.b).array() + c.b0;
    const Eigen::ArrayXd resid = ey.array() - fitted;
    const Eigen::ArrayXd cond_var =
        (moments.ey2.col(g).array() - ey.array().square()).max(0.0);
    c.sigma2 = std::max((w.array() * (resid.square() + cond_var)).sum() / mass, variance_floor);
    comps.push_back(std::move(c));
  }

  // Restore exact normalization of pi lost to rounding in the column sums.
  double total = 0.0;
  for (const auto& c : comps) total += c.pi;
  for (auto& c : comps) c.pi /= total;
  return MixtureModel(std::move(comps));
}

bool aitken_should_stop(double l_prev2, double l_prev, double l_curr, double epsilon) {
  const double denom = l_prev - l_prev2;
  if (std::abs(denom) <= 1e-14) return true;
  const double a = (l_curr - l_prev) / denom;
  if (a >= 1.0) return false;
  const double l_inf = l_prev + (l_curr - l_prev) / (1.0 - a);
  return l_inf - l_curr < epsilon;
}

Responsibilities initialize(const Dataset& data, int n_components, std::uint64_t seed,
                            InitStrategy strategy) {
  if (n_components < data.causes())
    throw DimensionMismatch("fewer components than observed causes");
  const auto n = static_cast<Eigen::Index>(data.size());
  Eigen::MatrixXd tau = Eigen::MatrixXd::Zero(n, n_components);
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> unit_exp(1.0);

  // Flat Dirichlet row from normalized unit exponentials.
  auto random_row = [&](Eigen::Index i) {
    for (int g = 0; g < n_components; ++g) tau(i, g) = unit_exp(rng);
    tau.row(i) /= tau.row(i).sum();
  };

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = static_cast<std::size_t>(i);
    if (strategy == InitStrategy::RandomSoft || data.censored(row)) random_row(i);
    if (!data.censored(row)) {
      tau.row(i).setZero();
      tau(i, data.cause(row) - 1) = 1.0;
    }
  }
  return {std::move(tau)};
}

FitResult run_em(const Dataset& data, const Responsibilities& start, const FitConfig& config) {
  config.validate();
  const auto n_comp = static_cast<int>(start.tau.cols());
  MixtureModel model = m_step(data, start, naive_moments(data, n_comp), config.variance_floor);
  std::vector<double> trace{observed_loglik(model, data)};

  bool converged = false;
  int iter = 0;
  while (iter < config.max_iter) {
    const CensoredMoments moments = impute_censored_moments(model, data);
    const Responsibilities resp = e_step_responsibilities(model, data);
    model = m_step(data, resp, moments, config.variance_floor);
    trace.push_back(observed_loglik(model, data));
    ++iter;
    const auto k = trace.size();
    if (k >= 3 && aitken_should_stop(trace[k - 3], trace[k - 2], trace[k - 1], config.epsilon)) {
      converged = true;
      break;
    }
  }
  Responsibilities final_resp = e_step_responsibilities(model, data);
  return FitResult{std::move(model), std::move(trace), iter, converged, std::move(final_resp)};
}

FitResult fit(const Dataset& data, int n_components, const FitConfig& config) {
  config.validate();
  if (n_components < 1) throw InvalidArgument("need at least one component");
  if (n_components != data.causes())
    throw DimensionMismatch("component count must equal the number of causes in the data");
  const auto needed = static_cast<std::size_t>(n_components) * static_cast<std::size_t>(data.dim() + 2);
  if (data.size() <= needed)
    throw InvalidArgument("too few records for " + std::to_string(n_components) +
                          " components in dimension " + std::to_string(data.dim()));

  const auto restarts = static_cast<std::size_t>(config.n_restarts);
  std::vector<std::optional<FitResult>> runs(restarts);
  parallel_for(restarts, config.threads, [&](std::size_t r) {
    try {
      const auto start = initialize(data, n_components, config.seed + r, config.strategy);
      runs[r] = run_em(data, start, config);
      runs[r]->restart = static_cast<int>(r);
    } catch (const Error&) {
      runs[r].reset();
    }
  });

  std::optional<FitResult> best;
  int failed = 0;
  for (auto& run : runs) {
    if (!run || !std::isfinite(run->loglik())) {
      ++failed;
      continue;
    }
    if (!best || run->loglik() > best->loglik()) best = std::move(run);
  }
  if (!best) throw AllRestartsFailed("all " + std::to_string(restarts) + " EM restarts failed");
  best->n_failed_restarts = failed;
  return std::move(*best);
}

}  // namespace cwaft
