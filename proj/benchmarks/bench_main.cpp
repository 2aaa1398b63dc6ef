#include <benchmark/benchmark.h>

#include <vector>

#include "evolvekit/density.hpp"
#include "evolvekit/simulator.hpp"
#include "evolvekit/special_functions.hpp"

using namespace evolvekit;

static void BM_HyperBessel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  double w = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_hyper_bessel(n, w).value);
    w = w < 20.0 ? w + 0.37 : 0.5;
  }
}
BENCHMARK(BM_HyperBessel)->DenseRange(1, 4);

static void BM_Density(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DensityModel model({n, 1.0, 1.0});
  std::vector<double> x(n, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(model(x, 1.0));
}
BENCHMARK(BM_Density)->DenseRange(1, 5);

static void BM_SimulateBatch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SimulationConfig config;
  config.samples = 10000;
  config.horizon = 2.0;
  config.threads = 1;
  for (auto _ : state) {
    auto data = simulate_batch({n, 1.0, 1.0}, config);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(config.samples));
}
BENCHMARK(BM_SimulateBatch)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
