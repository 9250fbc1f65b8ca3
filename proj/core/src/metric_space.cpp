#include "heiscut/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heiscut/rng.hpp"

namespace heiscut {

FiniteMetricSpace FiniteMetricSpace::with_unit_weights(std::size_t n) {
  FiniteMetricSpace s;
  s.weights.assign(n, 1.0);
  s.dist.assign(n * n, 0.0);
  return s;
}

void FiniteMetricSpace::validate(double tol) const {
  std::size_t n = size();
  if (dist.size() != n * n)
    throw std::invalid_argument("metric space: distance matrix size mismatch");
  if (!coords.empty() && coords.size() != n)
    throw std::invalid_argument("metric space: coords size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights[i] > 0.0))
      throw std::invalid_argument("metric space: nonpositive point weight");
    if (d(i, i) != 0.0)
      throw std::invalid_argument("metric space: nonzero diagonal");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::fabs(d(i, j) - d(j, i)) > tol)
        throw std::invalid_argument("metric space: asymmetric distances");
      if (!(d(i, j) > 0.0))
        throw std::invalid_argument(
            "metric space: zero or negative off-diagonal distance");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (d(i, j) > d(i, k) + d(k, j) + tol)
          throw std::invalid_argument("metric space: triangle violation");
}

FiniteMetricSpace graph_metric(std::size_t n,
                               const std::vector<std::array<double, 3>>& edges,
                               const std::string& label) {
  const double inf = std::numeric_limits<double>::infinity();
  FiniteMetricSpace s = FiniteMetricSpace::with_unit_weights(n);
  s.label = label;
  std::fill(s.dist.begin(), s.dist.end(), inf);
  for (std::size_t i = 0; i < n; ++i) s.d(i, i) = 0.0;
  for (const auto& e : edges) {
    auto u = static_cast<std::size_t>(e[0]);
    auto v = static_cast<std::size_t>(e[1]);
    double w = e[2];
    s.d(u, v) = std::min(s.d(u, v), w);
    s.d(v, u) = s.d(u, v);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (s.d(i, k) + s.d(k, j) < s.d(i, j))
          s.d(i, j) = s.d(i, k) + s.d(k, j);
  for (double v : s.dist)
    if (!(v < inf))
      throw std::invalid_argument("graph_metric: graph is not connected");
  return s;
}

FiniteMetricSpace builtin_space(const std::string& name) {
  auto starts_with = [&](const char* p) { return name.rfind(p, 0) == 0; };
  if (starts_with("path")) {
    std::size_t n = std::stoul(name.substr(4));
    if (n < 2) throw std::invalid_argument("pathN needs N >= 2");
    std::vector<std::array<double, 3>> edges;
    for (std::size_t i = 0; i + 1 < n; ++i)
      edges.push_back({double(i), double(i + 1), 1.0});
    return graph_metric(n, edges, name);
  }
  if (starts_with("cycle")) {
    std::size_t n = std::stoul(name.substr(5));
    if (n < 3) throw std::invalid_argument("cycleN needs N >= 3");
    std::vector<std::array<double, 3>> edges;
    for (std::size_t i = 0; i < n; ++i)
      edges.push_back({double(i), double((i + 1) % n), 1.0});
    return graph_metric(n, edges, name);
  }
  if (name == "k23") {
    // parts {0,1} and {2,3,4}
    std::vector<std::array<double, 3>> edges;
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 2; b < 5; ++b)
        edges.push_back({double(a), double(b), 1.0});
    return graph_metric(5, edges, name);
  }
  throw std::invalid_argument("unknown builtin space: " + name);
}

FiniteMetricSpace random_tree_metric(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_tree_metric: n >= 2");
  Rng rng(seed);
  std::vector<std::array<double, 3>> edges;
  for (std::size_t v = 1; v < n; ++v) {
    std::size_t parent = rng.below(v);
    edges.push_back({double(parent), double(v), 1.0});
  }
  auto s = graph_metric(n, edges, "tree");
  return s;
}

FiniteMetricSpace random_graph_metric(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_graph_metric: n >= 2");
  Rng rng(seed);
  std::vector<std::array<double, 3>> edges;
  // random spanning tree for connectivity, then extra edges
  for (std::size_t v = 1; v < n; ++v) {
    std::size_t parent = rng.below(v);
    edges.push_back({double(parent), double(v), 0.5 + rng.uniform()});
  }
  std::size_t extra = n + rng.below(n);
  for (std::size_t t = 0; t < extra; ++t) {
    std::size_t u = rng.below(n), v = rng.below(n);
    if (u == v) continue;
    edges.push_back({double(u), double(v), 0.5 + rng.uniform()});
  }
  return graph_metric(n, edges, "randgraph");
}

}  // namespace heiscut
