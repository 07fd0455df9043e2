#include <vector>

#include <benchmark/benchmark.h>

#include "srv/datagen.hpp"
#include "srv/detection.hpp"
#include "srv/simplex_projection.hpp"

namespace {

std::vector<double> input(std::size_t d) {
  srv::Rng rng(d);
  std::vector<double> v(d);
  for (auto& x : v) x = rng.pareto(1.0);
  return v;
}

void BM_ProjectSorted(benchmark::State& state) {
  const auto v = input(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(srv::project_sorted(v, 1.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProjectSorted)->RangeMultiplier(4)->Range(4, 1 << 16)->Complexity();

void BM_ProjectMedian(benchmark::State& state) {
  const auto v = input(static_cast<std::size_t>(state.range(0)));
  srv::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(srv::project_median(v, 1.0, rng));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProjectMedian)->RangeMultiplier(4)->Range(4, 1 << 16)->Complexity();

void BM_DetectDependent(benchmark::State& state) {
  srv::Rng rng(2);
  const auto data = srv::dependent_model(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(srv::detect(data.sample, srv::DetectionConfig{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DetectDependent)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_DamexRanked(benchmark::State& state) {
  srv::Rng rng(3);
  const auto data = srv::dependent_model(static_cast<std::size_t>(state.range(0)), rng);
  const auto ranked = srv::rank_transform(data.sample);
  for (auto _ : state) benchmark::DoNotOptimize(srv::damex_ranked(ranked, srv::DetectionConfig{}));
}
BENCHMARK(BM_DamexRanked)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
