#include <benchmark/benchmark.h>

#include "crpsbin/conformal.hpp"
#include "crpsbin/cost_matrix.hpp"
#include "crpsbin/dataset.hpp"
#include "crpsbin/partition.hpp"

using namespace crpsbin;

namespace {

void BM_Precompute(benchmark::State& state) {
  const auto ds = gen_heteroscedastic(static_cast<std::size_t>(state.range(0)), RngSeed{1});
  PrecomputeOptions opts;
  opts.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(precompute(ds, opts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Precompute)
    ->ArgsProduct({{250, 500, 1000, 2000}, {1}})
    ->Args({1000, 4})
    ->Unit(benchmark::kMillisecond);

void BM_PrecomputeExact(benchmark::State& state) {
  const auto ds = gen_heteroscedastic(static_cast<std::size_t>(state.range(0)), RngSeed{1});
  PrecomputeOptions opts;
  opts.exact_mode = true;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(precompute(ds, opts));
}
BENCHMARK(BM_PrecomputeExact)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Dp(benchmark::State& state) {
  const auto ds = gen_heteroscedastic(static_cast<std::size_t>(state.range(0)), RngSeed{1});
  const auto cm = precompute(ds);
  DpOptions opts;
  opts.threads = 1;
  const auto K = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(optimal_partition(cm, K, opts));
}
BENCHMARK(BM_Dp)->ArgsProduct({{500, 1000}, {5, 20}})->Unit(benchmark::kMillisecond);

void BM_PredictionSet(benchmark::State& state) {
  const Bin bin(gen_bimodal(static_cast<std::size_t>(state.range(0)), RngSeed{2}));
  const Score score = state.range(1) == 0 ? Score::crps() : Score::knn(1);
  for (auto _ : state) benchmark::DoNotOptimize(prediction_set(bin, 0.1, score));
}
BENCHMARK(BM_PredictionSet)->ArgsProduct({{50, 500}, {0, 1}})->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
