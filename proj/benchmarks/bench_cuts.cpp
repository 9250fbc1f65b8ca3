#include <benchmark/benchmark.h>

#include "heiscut/cuts.hpp"
#include "heiscut/grid.hpp"
#include "heiscut/rng.hpp"

using namespace heiscut;

static L1Map random_map(std::size_t n, std::size_t m) {
  Rng rng(1);
  L1Map f = L1Map::zeros(n, m);
  for (auto& v : f.values) v = double(rng.below(9)) - 4.0;
  return f;
}

static void BM_CutMeasureFromMap(benchmark::State& state) {
  L1Map f = random_map(state.range(0), 6);
  for (auto _ : state) benchmark::DoNotOptimize(cut_measure_from_map(f));
}
BENCHMARK(BM_CutMeasureFromMap)->Arg(16)->Arg(64)->Arg(256);

static void BM_CutMetric(benchmark::State& state) {
  L1Map f = random_map(state.range(0), 6);
  CutMeasure sigma = cut_measure_from_map(f);
  for (auto _ : state) benchmark::DoNotOptimize(cut_metric(sigma));
}
BENCHMARK(BM_CutMetric)->Arg(16)->Arg(64)->Arg(256);

static void BM_SliceScalarField(benchmark::State& state) {
  auto geom = std::make_shared<GridGeometry>(
      std::array<double, 3>{-1, -1, -1}, std::array<double, 3>{1, 1, 1},
      std::array<std::size_t, 3>{std::size_t(state.range(0)),
                                 std::size_t(state.range(0)),
                                 std::size_t(2 * state.range(0))});
  ScalarField f = sample_function(geom, [](const GroupElement& p) {
    return p.a + 0.5 * p.b * p.b + 0.3 * p.c;
  });
  for (auto _ : state)
    benchmark::DoNotOptimize(slice_scalar_field(f, 32));
}
BENCHMARK(BM_SliceScalarField)->Arg(32)->Arg(64);
