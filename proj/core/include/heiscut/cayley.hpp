#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "heiscut/metric_space.hpp"

namespace heiscut {

// Cayley-graph ball of the integer Heisenberg group. Default generating set
// is x = (1,0,0), y = (0,1,0) and their inverses; the set must be symmetric
// and exclude the identity.
struct CayleySpec {
  std::vector<std::array<long long, 3>> generators = {
      {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  int radius = 1;
  int cap = 6;  // radii above the cap are rejected with a size estimate
};

// Metric ball W_k: all elements of word length <= k, with the word metric of
// the full group restricted to the ball (BFS out to radius 2k, so the
// restriction is exact and W_{k-1} embeds isometrically in W_k). Points are
// ordered by (word length, a, b, c), so W_{k-1} is a prefix of W_k. Point
// coords carry the integer (a,b,c).
FiniteMetricSpace generate_ball(const CayleySpec& spec);

// Word length of a single integer element (BFS from the identity).
long long word_length(const std::array<long long, 3>& g,
                      const CayleySpec& spec);

// n quasi-uniform random points in the Koranyi ball B_radius(e) with their
// pairwise cc-distance matrix. Bit-reproducible for a fixed seed.
FiniteMetricSpace sample_cc_metric(int n, double radius, std::uint64_t seed,
                                   double tol = 1e-9);

}  // namespace heiscut
