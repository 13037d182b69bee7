#include <benchmark/benchmark.h>

#include <cmath>

#include "genum/conditioning.hpp"
#include "genum/optimizer.hpp"
#include "genum/synthlab.hpp"
#include "genum/twolevel.hpp"

using namespace genum;

namespace {

DataSet gaussian(std::uint64_t n, std::optional<OutlierSpec> out = {}) {
  GeneratorSpec s;
  s.kind = GeneratorKind::Gaussian;
  s.n = n;
  s.mu = 1.0;
  s.sigma = 0.1;
  s.seed = 42;
  s.outliers = out;
  return generate(s);
}

void BM_Granularize(benchmark::State& state) {
  const DataSet d = gaussian(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(granularize(d, 1 << 16, 1'000'000'000));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Granularize)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);

void BM_GreedyAtOneGranularity(benchmark::State& state) {
  const DataSet d = gaussian(static_cast<std::uint64_t>(state.range(0)));
  const Granularization gr = granularize(d, 1 << 12, 1'000'000'000);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_build(gr));
}
BENCHMARK(BM_GreedyAtOneGranularity)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);

void BM_BuildStandard(benchmark::State& state) {
  const DataSet d = gaussian(static_cast<std::uint64_t>(state.range(0)));
  BuildOptions o;
  o.early_stop = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(build_standard(d, o));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildStandard)
    ->ArgsProduct({{1 << 10, 1 << 13, 1 << 16}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

void BM_IsPich(benchmark::State& state) {
  const DataSet d = gaussian(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(is_pich(d));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IsPich)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);

void BM_TwoLevelOutlier(benchmark::State& state) {
  const DataSet d = gaussian(10000, OutlierSpec{1, std::ldexp(1.0, 34), 0.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(build_two_level(d));
}
BENCHMARK(BM_TwoLevelOutlier)->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State& state) {
  GeneratorSpec s;
  s.kind = GeneratorKind::BinomialMixture;
  s.n = static_cast<std::uint64_t>(state.range(0));
  s.sigma = 0.25;
  for (auto _ : state) benchmark::DoNotOptimize(generate_values(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Generate)->Range(1 << 10, 1 << 20);

}  // namespace

BENCHMARK_MAIN();
