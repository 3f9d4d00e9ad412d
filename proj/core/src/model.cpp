#include "cwaft/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cwaft/error.hpp"
#include "cwaft/numerics.hpp"

namespace cwaft {

Status Status::failed(int cause) {
  if (cause < 1) throw InvalidArgument("cause labels are 1-based, got " + std::to_string(cause));
  return Status(cause);
}

Dataset::Dataset(std::vector<SurvivalRecord> records, int n_causes)
    : records_(std::move(records)) {
  if (records_.empty()) throw InvalidArgument("dataset must contain at least one record");
  dim_ = static_cast<int>(records_.front().covariates.size());
  if (dim_ < 1) throw InvalidArgument("records need at least one covariate");

  int max_cause = 1;
  for (const auto& r : records_) max_cause = std::max(max_cause, r.status.cause());
  if (n_causes == 0) n_causes = max_cause;
  if (n_causes < max_cause)
    throw CauseOutOfRange(max_cause, n_causes);
  n_causes_ = n_causes;

  const auto n = static_cast<Eigen::Index>(records_.size());
  x_.resize(n, dim_);
  log_t_.resize(n);
  failed_counts_.assign(static_cast<std::size_t>(n_causes_), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = records_[static_cast<std::size_t>(i)];
    if (r.covariates.size() != dim_)
      throw DimensionMismatch("record " + std::to_string(i) + " has " +
                              std::to_string(r.covariates.size()) + " covariates, expected " +
                              std::to_string(dim_));
    if (!(r.time > 0.0) || !std::isfinite(r.time))
      throw InvalidArgument("record " + std::to_string(i) + " has non-positive time");
    if (!r.covariates.allFinite())
      throw InvalidArgument("record " + std::to_string(i) + " has non-finite covariates");
    x_.row(i) = r.covariates.transpose();
    log_t_(i) = std::log(r.time);
    if (r.status.is_censored())
      ++n_censored_;
    else
      ++failed_counts_[static_cast<std::size_t>(r.status.cause() - 1)];
  }
}

std::size_t Dataset::n_failed(int g) const {
  if (g < 1 || g > n_causes_) throw CauseOutOfRange(g, n_causes_);
  return failed_counts_[static_cast<std::size_t>(g - 1)];
}

MixtureModel::MixtureModel(std::vector<ComponentParams> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InvalidArgument("mixture needs at least one component");
  dim_ = static_cast<int>(components_.front().mu.size());
  double total = 0.0;
  for (const auto& c : components_) {
    if (c.mu.size() != dim_ || c.b.size() != dim_ || c.sigma_mat.rows() != dim_ ||
        c.sigma_mat.cols() != dim_)
      throw DimensionMismatch("component parameter blocks disagree on the covariate dimension");
    if (!(c.sigma2 > 0.0)) throw InvalidArgument("regression variance must be positive");
    if (!(c.pi > 0.0 && c.pi < 1.0) && !(components_.size() == 1 && c.pi == 1.0))
      throw InvalidArgument("mixing weights must lie in (0, 1)");
    total += c.pi;
  }
  if (std::abs(total - 1.0) > 1e-10) throw InvalidArgument("mixing weights must sum to one");
}

double linear_predictor(const ComponentParams& comp, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != comp.b.size()) throw DimensionMismatch("covariate vector has wrong dimension");
  return comp.b0 + comp.b.dot(x);
}

double cond_log_density(const ComponentParams& comp, const Eigen::Ref<const Eigen::VectorXd>& x,
                        double y) {
  const double sd = std::sqrt(comp.sigma2);
  const double z = (y - linear_predictor(comp, x)) / sd;
  return -0.5 * z * z - kLogSqrt2Pi - std::log(sd);
}

double cond_log_survival(const ComponentParams& comp, const Eigen::Ref<const Eigen::VectorXd>& x,
                         double y) {
  const double z = (y - linear_predictor(comp, x)) / std::sqrt(comp.sigma2);
  return log_std_normal_survival(z);
}

double conditional_survival_time(const ComponentParams& comp,
                                 const Eigen::Ref<const Eigen::VectorXd>& x, double t) {
  if (x.size() != comp.b.size()) throw DimensionMismatch("covariate vector has wrong dimension");
  if (t <= 0.0) return 1.0;
  return std::exp(cond_log_survival(comp, x, std::log(t)));
}

}  // namespace cwaft
