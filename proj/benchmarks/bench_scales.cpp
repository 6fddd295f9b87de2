#include <cmath>
#include <memory>

#include <benchmark/benchmark.h>

#include "scales/scales.hpp"

namespace {

using namespace scales;

void BM_GreedyCoverCube(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto space = FiniteMetricSpace::from_points(uniform_cube_sample(n, 2, 1));
  for (auto _ : state) benchmark::DoNotOptimize(covering_number_greedy(space, 0.05));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GreedyCoverCube)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

void BM_GreedyCoverProduct(benchmark::State& state) {
  const auto spec = ProductSpaceSpec::constant(2, 12);
  const auto z = materialize(spec, static_cast<std::size_t>(state.range(0)));
  const double eps = std::exp(spec.log_eps(4));
  for (auto _ : state) benchmark::DoNotOptimize(covering_number_greedy(*z.space, eps));
}
BENCHMARK(BM_GreedyCoverProduct)->DenseRange(8, 12, 2);

void BM_BestNMedian(benchmark::State& state) {
  auto space = std::make_shared<const FiniteMetricSpace>(
      FiniteMetricSpace::from_points(uniform_cube_sample(1024, 2, 3)));
  const auto mu = EmpiricalMeasure::uniform(space);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(best_n_median(mu, n).cost);
}
BENCHMARK(BM_BestNMedian)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LipschitzNetCount(benchmark::State& state) {
  const double eps = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lipschitz_net_count(eps).log_count);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LipschitzNetCount)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oNSquared);

void BM_PathMaxima(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_path_maxima(m, 1000, 7, {1, 4}));
  state.SetItemsProcessed(state.iterations() * 1000 * state.range(0));
}
BENCHMARK(BM_PathMaxima)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
