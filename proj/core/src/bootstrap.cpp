#include "cwaft/bootstrap.hpp"

#include <optional>
#include <random>

#include "cwaft/error.hpp"
#include "cwaft/parallel.hpp"

namespace cwaft {

namespace {

Eigen::Index block_size(int dim) { return 1 + dim + dim * dim + 1 + dim + 1; }

}  // namespace

Dataset stratified_resample(const Dataset& data, std::uint64_t seed) {
  // strata[0] = censored, strata[g] = failures from cause g
  std::vector<std::vector<std::size_t>> strata(static_cast<std::size_t>(data.causes()) + 1);
  for (std::size_t i = 0; i < data.size(); ++i)
    strata[static_cast<std::size_t>(data.record(i).status.code())].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<SurvivalRecord> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& members = strata[static_cast<std::size_t>(data.record(i).status.code())];
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    out.push_back(data.record(members[pick(rng)]));
  }
  return Dataset(std::move(out), data.causes());
}

Eigen::VectorXd flatten(const MixtureModel& model) {
  const int d = model.dim();
  Eigen::VectorXd v(block_size(d) * model.size());
  Eigen::Index k = 0;
  for (const auto& c : model.components()) {
    v(k++) = c.pi;
    v.segment(k, d) = c.mu;
    k += d;
    v.segment(k, d * d) = c.sigma_mat.reshaped();
    k += d * d;
    v(k++) = c.b0;
    v.segment(k, d) = c.b;
    k += d;
    v(k++) = c.sigma2;
  }
  return v;
}

std::vector<ComponentParams> unflatten(const Eigen::VectorXd& values, int n_components, int dim) {
  if (values.size() != block_size(dim) * n_components)
    throw DimensionMismatch("flattened parameter vector has the wrong length");
  std::vector<ComponentParams> out(static_cast<std::size_t>(n_components));
  Eigen::Index k = 0;
  for (auto& c : out) {
    c.pi = values(k++);
    c.mu = values.segment(k, dim);
    k += dim;
    c.sigma_mat = values.segment(k, dim * dim).reshaped(dim, dim);
    k += dim * dim;
    c.b0 = values(k++);
    c.b = values.segment(k, dim);
    k += dim;
    c.sigma2 = values(k++);
  }
  return out;
}

std::vector<ComponentParams> replicate_spread(std::span<const MixtureModel> estimates) {
  if (estimates.size() < 2) throw InvalidArgument("spread needs at least two estimates");
  const int n_comp = estimates.front().size();
  const int dim = estimates.front().dim();
  const auto m = static_cast<Eigen::Index>(estimates.size());
  Eigen::MatrixXd draws(m, block_size(dim) * n_comp);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto& est = estimates[static_cast<std::size_t>(r)];
    if (est.size() != n_comp || est.dim() != dim)
      throw DimensionMismatch("bootstrap estimates disagree in shape");
    draws.row(r) = flatten(est).transpose();
  }
  const Eigen::RowVectorXd mean = draws.colwise().mean();
  const Eigen::VectorXd sd =
      ((draws.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(m - 1))
          .sqrt()
          .transpose();
  return unflatten(sd, n_comp, dim);
}

BootstrapReport bootstrap_se(const Dataset& data, int n_components, const FitConfig& config,
                             int b, int threads) {
  if (b < 2) throw InvalidArgument("bootstrap needs at least two replicates");
  config.validate();
  const auto n_rep = static_cast<std::size_t>(b);
  const int workers = resolve_threads(threads);

  std::vector<std::optional<MixtureModel>> fits(n_rep);
  parallel_for(n_rep, workers, [&](std::size_t i) {
    FitConfig cfg = config;
    cfg.seed = config.seed + i;
    if (workers > 1) cfg.threads = 1;
    try {
      const Dataset replicate = stratified_resample(data, cfg.seed);
      fits[i] = fit(replicate, n_components, cfg).model;
    } catch (const Error&) {
      fits[i].reset();
    }
  });

  BootstrapReport report;
  report.b = b;
  for (auto& f : fits) {
    if (f)
      report.estimates.push_back(std::move(*f));
    else
      ++report.n_failed;
  }
  const auto m = report.estimates.size();
  if (m < 2)
    throw TooFewSuccesses(std::to_string(m) + " of " + std::to_string(b) +
                          " bootstrap replicates succeeded");

  report.se = replicate_spread(report.estimates);
  return report;
}

}  // namespace cwaft
