#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "heiscut/cayley.hpp"
#include "heiscut/rng.hpp"

using namespace heiscut;

namespace {

using IntElem = std::array<long long, 3>;

// independent BFS oracle over integer triples
std::map<IntElem, long long> oracle_bfs(long long radius) {
  std::vector<IntElem> gens = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  std::map<IntElem, long long> wl;
  std::vector<IntElem> frontier = {{0, 0, 0}};
  wl[{0, 0, 0}] = 0;
  for (long long d = 0; d < radius; ++d) {
    std::vector<IntElem> next;
    for (const auto& u : frontier) {
      for (const auto& s : gens) {
        IntElem v{u[0] + s[0], u[1] + s[1], u[2] + s[2] + u[0] * s[1]};
        if (wl.emplace(v, d + 1).second) next.push_back(v);
      }
    }
    frontier = std::move(next);
  }
  return wl;
}

}  // namespace

TEST_CASE("cayley ball sizes and small-radius metric") {
  CayleySpec spec;
  spec.radius = 0;
  auto w0 = generate_ball(spec);
  CHECK(w0.size() == 1);
  CHECK(w0.dist == std::vector<double>{0.0});

  spec.radius = 1;
  auto w1 = generate_ball(spec);
  CHECK(w1.size() == 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      double d = w1.d(i, j);
      CHECK((d == 1.0 || d == 2.0));
    }
}

TEST_CASE("ball metric equals the oracle word metric") {
  auto wl = oracle_bfs(6);
  CayleySpec spec;
  spec.radius = 3;
  auto w3 = generate_ball(spec);
  for (std::size_t i = 0; i < w3.size(); ++i) {
    for (std::size_t j = 0; j < w3.size(); ++j) {
      if (i == j) continue;
      IntElem u{(long long)w3.coords[i][0], (long long)w3.coords[i][1],
                (long long)w3.coords[i][2]};
      IntElem v{(long long)w3.coords[j][0], (long long)w3.coords[j][1],
                (long long)w3.coords[j][2]};
      IntElem diff{v[0] - u[0], v[1] - u[1],
                   v[2] - u[2] - u[0] * (v[1] - u[1])};
      // diff = u^{-1} v in integer coordinates
      auto it = wl.find(diff);
      REQUIRE(it != wl.end());
      CHECK(w3.d(i, j) == double(it->second));
    }
  }
}

TEST_CASE("the central element has word length 4") {
  CayleySpec spec;
  CHECK(word_length({0, 0, 1}, spec) == 4);
  auto wl = oracle_bfs(4);
  CHECK(wl.at({0, 0, 1}) == 4);
}

TEST_CASE("growth of |W_k| is quartic") {
  CayleySpec spec;
  std::vector<double> sizes;
  for (int k = 1; k <= 6; ++k) {
    spec.radius = k;
    sizes.push_back(double(generate_ball(spec).size()));
  }
  for (std::size_t i = 1; i < sizes.size(); ++i) CHECK(sizes[i] > sizes[i - 1]);
  // log-log slope over k = 2..6
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int k = 2; k <= 6; ++k) {
    double lx = std::log(double(k)), ly = std::log(sizes[k - 1]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  CHECK(slope > 3.2);
  CHECK(slope < 4.8);
}

TEST_CASE("restriction of W_k to W_{k-1} is exact") {
  CayleySpec spec;
  for (int k = 2; k <= 4; ++k) {
    spec.radius = k - 1;
    auto prev = generate_ball(spec);
    spec.radius = k;
    auto cur = generate_ball(spec);
    REQUIRE(prev.size() <= cur.size());
    // points are sorted by (word length, a, b, c): the prefix is W_{k-1}
    for (std::size_t i = 0; i < prev.size(); ++i)
      CHECK(prev.coords[i] == cur.coords[i]);
    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
      auto i = static_cast<std::size_t>(rng.below(prev.size()));
      auto j = static_cast<std::size_t>(rng.below(prev.size()));
      CHECK(prev.d(i, j) == cur.d(i, j));
    }
  }
}

TEST_CASE("radius cap is enforced with a size estimate") {
  CayleySpec spec;
  spec.radius = 7;
  CHECK_THROWS_WITH_AS(generate_ball(spec),
                       doctest::Contains("above cap"), std::invalid_argument);
}

TEST_CASE("generating set validation") {
  CayleySpec spec;
  spec.generators = {{1, 0, 0}};  // not symmetric
  CHECK_THROWS_AS(generate_ball(spec), std::invalid_argument);
  spec.generators = {{0, 0, 0}};
  CHECK_THROWS_AS(generate_ball(spec), std::invalid_argument);
}

TEST_CASE("sampled cc metric") {
  auto s = sample_cc_metric(2, 0.8, 42);
  CHECK(s.size() == 2);
  CHECK(s.d(0, 1) == s.d(1, 0));
  CHECK(s.d(0, 1) > 0.0);

  auto a = sample_cc_metric(12, 0.8, 7);
  auto b = sample_cc_metric(12, 0.8, 7);
  CHECK(a.dist == b.dist);  // bit-for-bit
  auto c = sample_cc_metric(12, 0.8, 8);
  CHECK(a.dist != c.dist);

  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      for (std::size_t k = 0; k < a.size(); ++k)
        CHECK(a.d(i, j) <= a.d(i, k) + a.d(k, j) + 1e-9);
}
