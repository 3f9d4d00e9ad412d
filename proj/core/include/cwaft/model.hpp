#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

namespace cwaft {

// Failure status of one subject. Cause labels are 1-based; 0 means censored,
// which is also the CSV encoding.
class Status {
 public:
  static constexpr Status censored() noexcept { return Status(0); }
  static Status failed(int cause);

  constexpr bool is_censored() const noexcept { return cause_ == 0; }
  constexpr int cause() const noexcept { return cause_; }
  constexpr int code() const noexcept { return cause_; }

  friend constexpr bool operator==(Status, Status) = default;

 private:
  constexpr explicit Status(int cause) noexcept : cause_(cause) {}
  int cause_;
};

struct SurvivalRecord {
  Eigen::VectorXd covariates;
  double time = 0.0;  // original time scale, > 0
  Status status = Status::censored();
};

// Immutable collection of records sharing one covariate dimension. Log-times
// are computed once on construction.
class Dataset {
 public:
  // n_causes defaults to the largest cause label present (at least 1).
  explicit Dataset(std::vector<SurvivalRecord> records, int n_causes = 0);

  std::size_t size() const noexcept { return records_.size(); }
  int dim() const noexcept { return dim_; }
  int causes() const noexcept { return n_causes_; }

  const SurvivalRecord& record(std::size_t i) const { return records_[i]; }
  std::span<const SurvivalRecord> records() const noexcept { return records_; }

  // N x d covariate matrix, row i = record i.
  const Eigen::MatrixXd& covariates() const noexcept { return x_; }
  const Eigen::VectorXd& log_times() const noexcept { return log_t_; }

  bool censored(std::size_t i) const { return records_[i].status.is_censored(); }
  int cause(std::size_t i) const { return records_[i].status.cause(); }

  std::size_t n_censored() const noexcept { return n_censored_; }
  // Number of observed failures from cause g (1-based).
  std::size_t n_failed(int g) const;

 private:
  std::vector<SurvivalRecord> records_;
  int dim_ = 0;
  int n_causes_ = 0;
  Eigen::MatrixXd x_;
  Eigen::VectorXd log_t_;
  std::size_t n_censored_ = 0;
  std::vector<std::size_t> failed_counts_;
};

struct ComponentParams {
  double pi = 1.0;
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma_mat;
  double b0 = 0.0;
  Eigen::VectorXd b;
  double sigma2 = 1.0;
};

// G components over a d-dimensional covariate space. Component g (0-based
// index g-1) models failures from cause g.
class MixtureModel {
 public:
  explicit MixtureModel(std::vector<ComponentParams> components);

  int size() const noexcept { return static_cast<int>(components_.size()); }
  int dim() const noexcept { return dim_; }
  const ComponentParams& component(int index) const { return components_[index]; }
  std::span<const ComponentParams> components() const noexcept { return components_; }

 private:
  std::vector<ComponentParams> components_;
  int dim_ = 0;
};

// b0 + b'x
double linear_predictor(const ComponentParams& comp, const Eigen::Ref<const Eigen::VectorXd>& x);

// Log of the normal density of the log-time y given x.
double cond_log_density(const ComponentParams& comp, const Eigen::Ref<const Eigen::VectorXd>& x,
                        double y);

// log P(Y > y | x) on the log-time scale.
double cond_log_survival(const ComponentParams& comp, const Eigen::Ref<const Eigen::VectorXd>& x,
                         double y);

// Log-normal survival S(t | x) on the original time scale; 1 for t -> 0+.
double conditional_survival_time(const ComponentParams& comp,
                                 const Eigen::Ref<const Eigen::VectorXd>& x, double t);

}  // namespace cwaft
