#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cwaft/em.hpp"

namespace cwaft {

struct BootstrapReport {
  int b = 0;
  // Successful replicate fits, in replicate order.
  std::vector<MixtureModel> estimates;
  // Element-wise standard deviations laid out like the fitted components.
  std::vector<ComponentParams> se;
  int n_failed = 0;
};

// Resamples each stratum (censored, and failures from each cause) with
// replacement from itself. Position i of the replicate is drawn from the
// stratum of record i, so stratum counts and their positions are preserved.
Dataset stratified_resample(const Dataset& data, std::uint64_t seed);

// Replicate i resamples and fits with seed config.seed + i. Replicates run on
// up to `threads` workers (0 = hardware concurrency); the report does not
// depend on the thread count. Throws TooFewSuccesses below two fits.
BootstrapReport bootstrap_se(const Dataset& data, int n_components, const FitConfig& config,
                             int b, int threads = 0);

// Element-wise standard deviation (divisor m - 1) across m >= 2 fitted models.
std::vector<ComponentParams> replicate_spread(std::span<const MixtureModel> estimates);

// Flattened parameter vector in ComponentParams order:
// pi, mu, sigma_mat (column-major), b0, b, sigma2 for each component.
Eigen::VectorXd flatten(const MixtureModel& model);
std::vector<ComponentParams> unflatten(const Eigen::VectorXd& values, int n_components, int dim);

}  // namespace cwaft
