#include <benchmark/benchmark.h>

#include <vector>

#include "cwaft/numerics.hpp"

namespace {

std::vector<double> z_grid() {
  std::vector<double> z;
  for (double v = -30.0; v <= 40.0; v += 0.25) z.push_back(v);
  return z;
}

void BM_TruncMean(benchmark::State& state) {
  const auto zs = z_grid();
  for (auto _ : state)
    for (double z : zs) benchmark::DoNotOptimize(cwaft::trunc_normal_mean(1.0, 2.0, 1.0 + 2.0 * z));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(zs.size()));
}
BENCHMARK(BM_TruncMean);

void BM_TruncSecondMoment(benchmark::State& state) {
  const auto zs = z_grid();
  for (auto _ : state)
    for (double z : zs)
      benchmark::DoNotOptimize(cwaft::trunc_normal_second_moment(1.0, 2.0, 1.0 + 2.0 * z));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(zs.size()));
}
BENCHMARK(BM_TruncSecondMoment);

void BM_LogSurvival(benchmark::State& state) {
  const auto zs = z_grid();
  for (auto _ : state)
    for (double z : zs) benchmark::DoNotOptimize(cwaft::log_std_normal_survival(z));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(zs.size()));
}
BENCHMARK(BM_LogSurvival);

}  // namespace
