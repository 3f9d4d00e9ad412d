#include "cwaft/selection.hpp"

#include <cmath>

#include "cwaft/error.hpp"

namespace cwaft {

int count_parameters(int n_components, int dim) {
  if (n_components < 1 || dim < 1) throw InvalidArgument("G and d must be positive");
  const int per_component = dim + dim * (dim + 1) / 2 + 1 + dim + 1;
  return (n_components - 1) + n_components * per_component;
}

ModelScore make_score(double loglik, int k, std::size_t n) {
  if (k < 1 || n < 1) throw InvalidArgument("score needs positive k and n");
  return {loglik, k, n, -2.0 * loglik + 2.0 * k,
          -2.0 * loglik + k * std::log(static_cast<double>(n))};
}

ModelScore score(const FitResult& fit, const Dataset& data) {
  return make_score(observed_loglik(fit.model, data),
                    count_parameters(fit.model.size(), fit.model.dim()), data.size());
}

std::string select_best(std::span<const std::pair<std::string, ModelScore>> scores,
                        Criterion criterion) {
  if (scores.empty()) throw InvalidArgument("no candidate models to select from");
  auto value = [criterion](const ModelScore& s) {
    return criterion == Criterion::AIC ? s.aic : s.bic;
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const auto& cand = scores[i].second;
    const auto& cur = scores[best].second;
    if (value(cand) < value(cur) || (value(cand) == value(cur) && cand.k < cur.k)) best = i;
  }
  return scores[best].first;
}

}  // namespace cwaft
