#include <benchmark/benchmark.h>

#include "heiscut/distortion.hpp"
#include "heiscut/metric_space.hpp"

using namespace heiscut;

static void BM_DistortionExact(benchmark::State& state) {
  auto space = random_graph_metric(state.range(0), 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(min_distortion_exact(space));
}
BENCHMARK(BM_DistortionExact)->Arg(6)->Arg(8)->Arg(10);

static void BM_DistortionColgen(benchmark::State& state) {
  auto space = random_graph_metric(state.range(0), 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(min_distortion_colgen(space));
}
BENCHMARK(BM_DistortionColgen)->Arg(10)->Arg(14);
