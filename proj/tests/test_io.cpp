#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "heiscut/io.hpp"
#include "heiscut/rng.hpp"

using namespace heiscut;

TEST_CASE("hex bit-vector round trip") {
  Rng rng(3);
  for (std::size_t n : {1ul, 7ul, 8ul, 65ul, 200ul}) {
    BitVec bits(n);
    for (std::size_t i = 0; i < n; ++i) bits.set(i, rng.coin());
    std::string hex = io::bits_to_hex(bits);
    CHECK(hex.size() == 2 * ((n + 7) / 8));
    CHECK(io::hex_to_bits(hex, n) == bits);
  }
  CHECK_THROWS_AS(io::hex_to_bits("zz", 8), std::invalid_argument);
  CHECK_THROWS_AS(io::hex_to_bits("ab", 32), std::invalid_argument);
}

TEST_CASE("cut measure json round trip preserves the metric") {
  Rng rng(4);
  CutMeasure sigma;
  sigma.n = 9;
  for (int t = 0; t < 4; ++t) {
    BitVec bits(sigma.n);
    for (std::size_t i = 0; i < sigma.n; ++i) bits.set(i, rng.coin());
    if (bits.count() == 0 || bits.count() == sigma.n) continue;
    sigma.add(Cut::from_membership(bits), 0.3 + rng.uniform());
  }
  io::json j = io::cut_measure_to_json(sigma);
  CHECK(j.at("n") == 9);
  CutMeasure back = io::cut_measure_from_json(j);
  CHECK(cut_metric(back) == cut_metric(sigma));
  std::vector<double> w(sigma.n, 1.0);
  CHECK(back.total_mass(w) == sigma.total_mass(w));
}

TEST_CASE("metric space json and edge list") {
  auto s = builtin_space("cycle5");
  io::json j = io::metric_space_to_json(s);
  auto back = io::metric_space_from_json(j);
  CHECK(back.dist == s.dist);
  CHECK(back.weights == s.weights);
  std::string edges = io::metric_space_edge_list(s);
  CHECK(edges.find("0 1 1") != std::string::npos);
  CHECK(edges.find("0 2 2") != std::string::npos);
}

TEST_CASE("l1 map csv round trip") {
  Rng rng(5);
  L1Map f = L1Map::zeros(6, 3);
  for (auto& v : f.values) v = rng.uniform(-2, 2);
  for (auto& w : f.target_weights) w = 0.5 + rng.uniform();
  for (auto& w : f.domain_weights) w = 0.5 + rng.uniform();
  L1Map back = io::l1map_from_csv(io::l1map_to_csv(f));
  CHECK(back.n == f.n);
  CHECK(back.m == f.m);
  CHECK(back.values == f.values);
  CHECK(back.target_weights == f.target_weights);
  CHECK(back.domain_weights == f.domain_weights);
  CHECK_THROWS_AS(io::l1map_from_csv("bogus"), std::invalid_argument);
}

TEST_CASE("grid set binary round trip") {
  auto geom = std::make_shared<GridGeometry>(
      std::array<double, 3>{-1, -0.5, -1}, std::array<double, 3>{1, 0.5, 1},
      std::array<std::size_t, 3>{12, 10, 18});
  GridSet E = rasterize(geom, [](const GroupElement& p) {
    return p.a + p.b - 0.3 * p.c > 0.1;
  });
  auto path = std::filesystem::temp_directory_path() / "heiscut_gridset.bin";
  io::write_gridset(path.string(), E);
  GridSet back = io::read_gridset(path.string());
  CHECK(back.membership == E.membership);
  CHECK(back.geom->same_as(*E.geom));
  std::filesystem::remove(path);
}

TEST_CASE("perimeter field csv lists nonzero voxels") {
  auto geom = std::make_shared<GridGeometry>(
      std::array<double, 3>{-1, -1, -1}, std::array<double, 3>{1, 1, 1},
      std::array<std::size_t, 3>{8, 8, 8});
  PerimeterField f;
  f.geom = geom;
  f.density.assign(geom->num_voxels(), 0.0);
  f.density[5] = 1.25;
  f.density[100] = 0.5;
  std::string csv = io::perimeter_field_to_csv(f);
  CHECK(csv.find("5,1.25") != std::string::npos);
  CHECK(csv.find("100,0.5") != std::string::npos);
  CHECK(csv.find("6,") == std::string::npos);
}

TEST_CASE("fnv1a hash is stable") {
  CHECK(io::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a("heiscut") == io::fnv1a("heiscut"));
  CHECK(io::fnv1a("a") != io::fnv1a("b"));
}
