#pragma once

#include <Eigen/Core>
#include <Eigen/Cholesky>

namespace cwaft {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))

// Above this standardized threshold the upper tail underflows; truncated
// moments fall back to their leading asymptotic terms.
inline constexpr double kTailClamp = 38.0;

double std_normal_pdf(double z);
double std_normal_cdf(double z);

// log(1 - Phi(z)), accurate deep into both tails.
double log_std_normal_survival(double z);

// Inverse Mills ratio phi(z) / (1 - Phi(z)), i.e. the standard normal hazard.
// Finite for every finite z.
double std_normal_hazard(double z);

/// Mean of N(mu, sigma^2) truncated to (y_star, inf).
double trunc_normal_mean(double mu, double sigma, double y_star);

/// Second raw moment E(y^2) of N(mu, sigma^2) truncated to (y_star, inf).
/// Always >= trunc_normal_mean(mu, sigma, y_star)^2.
double trunc_normal_second_moment(double mu, double sigma, double y_star);

// Multivariate normal log-density with a cached factorization. Construction
// throws NonPositiveDefinite when sigma cannot be factorized even after one
// ridge retry of 1e-8 * trace(sigma) / d on the diagonal.
class GaussianDensity {
 public:
  GaussianDensity(Eigen::VectorXd mu, const Eigen::MatrixXd& sigma);

  double log_pdf(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  int dim() const noexcept { return static_cast<int>(mu_.size()); }
  double log_det() const noexcept { return log_det_; }
  bool ridged() const noexcept { return ridged_; }

 private:
  Eigen::VectorXd mu_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_det_ = 0.0;
  bool ridged_ = false;
};

double mvn_logpdf(const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& mu, const Eigen::MatrixXd& sigma);

// Symmetrizes sigma and, if it is not positive definite, adds the ridge used by
// GaussianDensity. Throws NonPositiveDefinite if that is still not enough.
Eigen::MatrixXd regularize_spd(const Eigen::MatrixXd& sigma);

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& v);

}  // namespace cwaft
