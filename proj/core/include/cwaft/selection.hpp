#pragma once

#include <span>
#include <string>
#include <utility>

#include "cwaft/em.hpp"

namespace cwaft {

struct ModelScore {
  double loglik = 0.0;
  int k = 0;
  std::size_t n = 0;
  double aic = 0.0;
  double bic = 0.0;
};

enum class Criterion { AIC, BIC };

// Free parameters of a G-component model over d covariates: G-1 mixing
// weights, then per component a mean, a symmetric covariance, an intercept,
// d slopes and a regression variance.
int count_parameters(int n_components, int dim);

ModelScore make_score(double loglik, int k, std::size_t n);

ModelScore score(const FitResult& fit, const Dataset& data);

// Minimal criterion; ties go to the smaller k, then to the earlier entry.
std::string select_best(std::span<const std::pair<std::string, ModelScore>> scores,
                        Criterion criterion);

}  // namespace cwaft
