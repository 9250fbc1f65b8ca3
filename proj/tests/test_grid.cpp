#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "heiscut/grid.hpp"
#include "heiscut/rng.hpp"

using namespace heiscut;

namespace {

GeometryPtr small_geom(std::size_t na = 16, std::size_t nb = 16,
                       std::size_t nc = 32) {
  return std::make_shared<GridGeometry>(std::array<double, 3>{-1, -1, -1},
                                        std::array<double, 3>{1, 1, 1},
                                        std::array<std::size_t, 3>{na, nb, nc});
}

}  // namespace

TEST_CASE("indexing round trips and locate") {
  auto g = small_geom();
  for (std::size_t v : {0ul, 5ul, 511ul, g->num_voxels() - 1}) {
    auto [ia, jb, kc] = g->unindex(v);
    CHECK(g->index(ia, jb, kc) == v);
    auto p = g->center(v);
    auto back = g->locate(p);
    REQUIRE(back.has_value());
    CHECK(*back == v);
  }
  CHECK(!g->locate({2.0, 0, 0}).has_value());
  CHECK(!g->locate({0, 0, -1.5}).has_value());
}

TEST_CASE("line families partition the voxels") {
  auto g = small_geom(8, 10, 12);
  for (const LineDecomposition* dec : {&g->p_lines(), &g->q_lines()}) {
    std::vector<int> seen(g->num_voxels(), 0);
    for (const auto& line : dec->lines)
      for (std::size_t v : line.idx) seen[v] += 1;
    for (int c : seen) CHECK(c == 1);
  }
}

TEST_CASE("q-line snapping stays within half a c-cell") {
  auto g = small_geom(12, 12, 24);
  for (const auto& line : g->q_lines().lines) {
    for (std::size_t v : line.idx) {
      auto [ia, jb, kc] = g->unindex(v);
      GroupElement p = g->center(v);
      // the line label is kc - shift; the snapped c must be within dc/2 of
      // the exact curve c0 + a*b through this column
      long long m = static_cast<long long>(kc) - g->q_shift(ia, jb);
      double c0 = g->lo()[2] + (static_cast<double>(m) + 0.5) * g->dc();
      double exact_c = c0 + p.a * p.b;
      CHECK(std::fabs(p.c - exact_c) <= 0.5 * g->dc() + 1e-12);
    }
  }
}

TEST_CASE("grid variation on a hand-built field") {
  auto g = small_geom(4, 1, 1);
  // a single P-line of 4 voxels with transverse weight db*dc = 2*2 = 4
  ScalarField f;
  f.geom = g;
  f.values = {0, 1, 1, 0};
  CHECK(grid_variation(f) == doctest::Approx(2.0 * 4.0));
}

TEST_CASE("half-space rasterization is center-saturated") {
  auto g = small_geom(10, 10, 14);
  GridSet H = rasterize_halfspace(g, HalfSpace{0.1, -0.2, 0.7});
  for (std::size_t ia = 0; ia < 10; ++ia)
    for (std::size_t jb = 0; jb < 10; ++jb) {
      bool first = H.contains(g->index(ia, jb, 0));
      for (std::size_t kc = 1; kc < 14; ++kc)
        CHECK(H.contains(g->index(ia, jb, kc)) == first);
    }
}

TEST_CASE("slicing a field yields the quantized cut measure exactly") {
  auto g = small_geom(10, 8, 12);
  ScalarField f = sample_function(
      g, [](const GroupElement& p) { return p.a + 0.5 * p.b * p.b - 0.3 * p.c; });
  SlicedField sliced = slice_scalar_field(f, 24);
  const auto& sigma = sliced.sigma;
  REQUIRE(sigma.size() == 23);

  // quantized-map distances match the atom superposition exactly
  Rng rng(3);
  for (int t = 0; t < 400; ++t) {
    std::size_t u = rng.below(g->num_voxels());
    std::size_t v = rng.below(g->num_voxels());
    double d_atoms = 0;
    for (std::size_t k = 0; k < sigma.size(); ++k)
      if (sigma.atoms[k].get(u) != sigma.atoms[k].get(v))
        d_atoms += sigma.weights[k];
    double d_quant =
        std::fabs(sliced.quantized.values[u] - sliced.quantized.values[v]);
    CHECK(d_atoms == doctest::Approx(d_quant).epsilon(1e-12));
  }

  // mass identity: sum of w*mu(E) equals the integral of (f_q - min)
  double mass = 0;
  for (std::size_t k = 0; k < sigma.size(); ++k)
    mass += sigma.weights[k] * g->voxel_volume() *
            static_cast<double>(sigma.atoms[k].count());
  double mn = *std::min_element(sliced.quantized.values.begin(),
                                sliced.quantized.values.end());
  double integral = 0;
  for (double v : sliced.quantized.values)
    integral += (v - mn) * g->voxel_volume();
  CHECK(mass == doctest::Approx(integral).epsilon(1e-12));

  // grid coarea: variation of the quantized field equals the weighted sum of
  // indicator variations
  double lhs = grid_variation(sliced.quantized);
  double rhs = 0;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    ScalarField ind;
    ind.geom = g;
    ind.values.assign(g->num_voxels(), 0.0);
    for (std::size_t v = 0; v < g->num_voxels(); ++v)
      if (sigma.atoms[k].get(v)) ind.values[v] = 1.0;
    rhs += sigma.weights[k] * grid_variation(ind);
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

  // constant field gives the empty measure
  ScalarField c = sample_function(g, [](const GroupElement&) { return 2.0; });
  CHECK(slice_scalar_field(c, 10).sigma.size() == 0);
}

TEST_CASE("grid set measure and complement") {
  auto g = small_geom(6, 6, 6);
  GridSet E = rasterize(g, [](const GroupElement& p) { return p.a > 0.0; });
  CHECK(E.measure() == doctest::Approx(0.5 * 8.0));
  GridSet Ec = E.complement();
  CHECK(E.measure() + Ec.measure() == doctest::Approx(8.0));
  for (std::size_t v = 0; v < g->num_voxels(); ++v)
    CHECK(E.contains(v) != Ec.contains(v));
}

TEST_CASE("embed distance of a grid cut measure") {
  auto g = small_geom(10, 10, 10);
  ScalarField f = sample_function(g, [](const GroupElement& p) { return p.a; });
  auto sliced = slice_scalar_field(f, 10);
  GroupElement u{-0.75, 0, 0}, v{0.75, 0, 0};
  double d = sliced.sigma.embed_distance(u, v);
  double expect = std::fabs(sliced.quantized.values[*g->locate(u)] -
                            sliced.quantized.values[*g->locate(v)]);
  CHECK(d == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(sliced.sigma.embed_distance({5, 0, 0}, v), std::out_of_range);
}
