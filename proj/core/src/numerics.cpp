#include "cwaft/numerics.hpp"

#include <cmath>
#include <limits>

#include "cwaft/error.hpp"

namespace cwaft {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kLog2Pi = 1.83787706640934548356;

// Switch point between the erfc formulation and the continued fraction.
constexpr double kContinuedFractionFrom = 8.0;
constexpr int kContinuedFractionTerms = 64;

// Laplace continued fraction for the hazard, z + 1/(z + 2/(z + 3/(z + ...))).
// Returns the tail part 1/(z + 2/(z + ...)) so callers can form hazard - z
// without cancellation. Only used for z > 8, where 64 terms are far past
// convergence.
double hazard_excess_cf(double z) {
  double t = z;
  for (int k = kContinuedFractionTerms; k >= 2; --k) t = z + k / t;
  return 1.0 / t;
}

}  // namespace

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z - kLogSqrt2Pi); }

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double log_std_normal_survival(double z) {
  if (z < 0.0) return std::log1p(-0.5 * std::erfc(-z * kInvSqrt2));
  if (z <= kContinuedFractionFrom) return std::log(0.5 * std::erfc(z * kInvSqrt2));
  const double hazard = z + hazard_excess_cf(z);
  return -0.5 * z * z - kLogSqrt2Pi - std::log(hazard);
}

double std_normal_hazard(double z) {
  if (z <= kContinuedFractionFrom) return std_normal_pdf(z) / (0.5 * std::erfc(z * kInvSqrt2));
  return z + hazard_excess_cf(z);
}

double trunc_normal_mean(double mu, double sigma, double y_star) {
  const double z = (y_star - mu) / sigma;
  if (z > kTailClamp) return y_star + sigma / z;
  return mu + sigma * std_normal_hazard(z);
}

// Written as mean^2 + sigma^2 * (1 + z*h - h^2), which is algebraically the
// same as sigma^2 (z*h + 1) + 2*mu*E(y) - mu^2 but keeps the conditional
// variance term explicit so it can be clamped at zero.
double trunc_normal_second_moment(double mu, double sigma, double y_star) {
  const double z = (y_star - mu) / sigma;
  if (z > kTailClamp) {
    const double mean = y_star + sigma / z;
    return mean * mean + sigma * sigma / (z * z);
  }
  double h = 0.0;
  double var_factor = 0.0;
  if (z > kContinuedFractionFrom) {
    const double excess = hazard_excess_cf(z);
    h = z + excess;
    var_factor = 1.0 - excess * h;
  } else {
    h = std_normal_hazard(z);
    var_factor = 1.0 + z * h - h * h;
  }
  var_factor = std::max(var_factor, 0.0);
  const double mean = mu + sigma * h;
  return mean * mean + sigma * sigma * var_factor;
}

namespace {

bool try_factor(const Eigen::MatrixXd& m, Eigen::LLT<Eigen::MatrixXd>& llt) {
  if (!m.allFinite()) return false;
  llt.compute(m);
  if (llt.info() != Eigen::Success) return false;
  return (llt.matrixLLT().diagonal().array() > 0.0).all();
}

Eigen::MatrixXd ridge_of(const Eigen::MatrixXd& sym) {
  const double d = static_cast<double>(sym.rows());
  const double ridge = 1e-8 * sym.trace() / d;
  Eigen::MatrixXd out = sym;
  out.diagonal().array() += ridge;
  return out;
}

}  // namespace

GaussianDensity::GaussianDensity(Eigen::VectorXd mu, const Eigen::MatrixXd& sigma)
    : mu_(std::move(mu)) {
  if (sigma.rows() != sigma.cols() || sigma.rows() != mu_.size() || mu_.size() == 0)
    throw DimensionMismatch("covariance must be square and match the mean dimension");
  const Eigen::MatrixXd sym = 0.5 * (sigma + sigma.transpose());
  if (!try_factor(sym, llt_)) {
    ridged_ = true;
    if (!(sym.trace() > 0.0) || !try_factor(ridge_of(sym), llt_))
      throw NonPositiveDefinite("covariance matrix is not positive definite after ridge");
  }
  log_det_ = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

double GaussianDensity::log_pdf(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != mu_.size()) throw DimensionMismatch("covariate vector has wrong dimension");
  const Eigen::VectorXd r = llt_.matrixL().solve(x - mu_);
  return -0.5 * (static_cast<double>(mu_.size()) * kLog2Pi + log_det_ + r.squaredNorm());
}

double mvn_logpdf(const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& mu, const Eigen::MatrixXd& sigma) {
  return GaussianDensity(mu, sigma).log_pdf(x);
}

Eigen::MatrixXd regularize_spd(const Eigen::MatrixXd& sigma) {
  const Eigen::MatrixXd sym = 0.5 * (sigma + sigma.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (try_factor(sym, llt)) return sym;
  if (sym.trace() > 0.0) {
    Eigen::MatrixXd ridged = ridge_of(sym);
    if (try_factor(ridged, llt)) return ridged;
  }
  throw NonPositiveDefinite("covariance matrix is not positive definite after ridge");
}

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double m = v.maxCoeff();
  if (m == -std::numeric_limits<double>::infinity()) return m;
  return m + std::log((v.array() - m).exp().sum());
}

}  // namespace cwaft
