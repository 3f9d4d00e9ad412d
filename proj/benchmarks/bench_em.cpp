#include <benchmark/benchmark.h>

#include "cwaft/cwaft.hpp"

namespace {

cwaft::Dataset simulated(int n) {
  auto s = cwaft::reference_scenario();
  s.n_total = n;
  s.n_censored = n / 10;
  s.seed = 1;
  return cwaft::generate(s).data;
}

cwaft::MixtureModel fitted(const cwaft::Dataset& data) {
  cwaft::FitConfig cfg;
  cfg.n_restarts = 1;
  return cwaft::fit(data, 2, cfg).model;
}

void BM_EStep(benchmark::State& state) {
  const auto data = simulated(static_cast<int>(state.range(0)));
  const auto model = fitted(data);
  for (auto _ : state) benchmark::DoNotOptimize(cwaft::e_step_responsibilities(model, data));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EStep)->RangeMultiplier(4)->Range(500, 32000);

void BM_Imputation(benchmark::State& state) {
  const auto data = simulated(static_cast<int>(state.range(0)));
  const auto model = fitted(data);
  for (auto _ : state) benchmark::DoNotOptimize(cwaft::impute_censored_moments(model, data));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Imputation)->RangeMultiplier(4)->Range(500, 32000);

void BM_MStep(benchmark::State& state) {
  const auto data = simulated(static_cast<int>(state.range(0)));
  const auto model = fitted(data);
  const auto resp = cwaft::e_step_responsibilities(model, data);
  const auto mom = cwaft::impute_censored_moments(model, data);
  for (auto _ : state) benchmark::DoNotOptimize(cwaft::m_step(data, resp, mom, 1e-10));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MStep)->RangeMultiplier(4)->Range(500, 32000);

void BM_ObservedLoglik(benchmark::State& state) {
  const auto data = simulated(static_cast<int>(state.range(0)));
  const auto model = fitted(data);
  for (auto _ : state) benchmark::DoNotOptimize(cwaft::observed_loglik(model, data));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ObservedLoglik)->RangeMultiplier(4)->Range(500, 32000);

void BM_Fit(benchmark::State& state) {
  const auto data = simulated(500);
  cwaft::FitConfig cfg;
  cfg.n_restarts = static_cast<int>(state.range(0));
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(cwaft::fit(data, 2, cfg));
}
BENCHMARK(BM_Fit)->Arg(1)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Bootstrap(benchmark::State& state) {
  const auto data = simulated(500);
  cwaft::FitConfig cfg;
  cfg.n_restarts = 5;
  for (auto _ : state) benchmark::DoNotOptimize(cwaft::bootstrap_se(data, 2, cfg, 20));
}
BENCHMARK(BM_Bootstrap)->Unit(benchmark::kMillisecond);

void BM_KaplanMeier(benchmark::State& state) {
  const auto data = simulated(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cwaft::kaplan_meier(data));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KaplanMeier)->RangeMultiplier(4)->Range(500, 32000);

}  // namespace
