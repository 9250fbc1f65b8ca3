#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace heiscut {

// Finite measured metric space: positive point weights plus a symmetric
// distance matrix. Points may carry ambient coordinates (used to seed
// coordinate cuts in the distortion solver); coords is either empty or has
// one entry per point.
struct FiniteMetricSpace {
  std::vector<double> weights;              // mu_i > 0
  std::vector<double> dist;                 // n×n row-major
  std::vector<std::array<double, 3>> coords;  // optional
  std::string label;

  std::size_t size() const { return weights.size(); }

  double d(std::size_t i, std::size_t j) const { return dist[i * size() + j]; }
  double& d(std::size_t i, std::size_t j) { return dist[i * size() + j]; }

  static FiniteMetricSpace with_unit_weights(std::size_t n);

  // Throws std::invalid_argument on asymmetry, nonzero diagonal, nonpositive
  // off-diagonal entries, or a triangle-inequality violation beyond tol.
  void validate(double tol = 1e-9) const;
};

// Shortest-path metric of a weighted undirected graph (Floyd–Warshall).
FiniteMetricSpace graph_metric(std::size_t n,
                               const std::vector<std::array<double, 3>>& edges,
                               const std::string& label = "");

// Named small spaces used throughout tests and the CLI:
//   "pathN"  path metric on N points, d(i,j) = |i-j|
//   "cycleN" shortest-path metric of the N-cycle
//   "k23"    complete bipartite K_{2,3} shortest-path metric
FiniteMetricSpace builtin_space(const std::string& name);

// Uniformly random tree on n vertices with unit edge lengths (seeded),
// shortest-path metric.
FiniteMetricSpace random_tree_metric(std::size_t n, std::uint64_t seed);

// Random connected weighted graph shortest-path metric (seeded).
FiniteMetricSpace random_graph_metric(std::size_t n, std::uint64_t seed);

}  // namespace heiscut
