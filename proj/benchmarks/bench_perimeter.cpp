#include <benchmark/benchmark.h>

#include "heiscut/perimeter.hpp"

using namespace heiscut;

static GeometryPtr bench_geom(std::size_t n) {
  return std::make_shared<GridGeometry>(std::array<double, 3>{-1, -1, -1},
                                        std::array<double, 3>{1, 1, 1},
                                        std::array<std::size_t, 3>{n, n, 2 * n});
}

static void BM_PerimeterField(benchmark::State& state) {
  auto geom = bench_geom(state.range(0));
  GridSet E = rasterize(geom, [](const GroupElement& p) {
    return koranyi_gauge(p) <= 0.6;
  });
  for (auto _ : state) benchmark::DoNotOptimize(perimeter(E));
}
BENCHMARK(BM_PerimeterField)->Arg(48)->Arg(96);

static void BM_Alpha(benchmark::State& state) {
  auto geom = bench_geom(64);
  GridSet E = rasterize(geom, [](const GroupElement& p) {
    return koranyi_gauge(p) <= 0.6;
  });
  BallCache cache(geom);
  GroupElement x{0.48, 0.0, 0.05};
  double r = double(state.range(0)) / 100.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(alpha(E, x, r, cache));
}
BENCHMARK(BM_Alpha)->Arg(10)->Arg(20)->Arg(40);
