#include "heiscut/cayley.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "heiscut/heisenberg.hpp"
#include "heiscut/rng.hpp"

namespace heiscut {

namespace {

using IntElem = std::array<long long, 3>;

IntElem imul(const IntElem& g, const IntElem& h) {
  return {g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1]};
}

IntElem iinv(const IntElem& g) {
  return {-g[0], -g[1], g[0] * g[1] - g[2]};
}

struct ElemHash {
  std::size_t operator()(const IntElem& e) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (long long v : e) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

void check_spec(const CayleySpec& spec) {
  for (const auto& g : spec.generators) {
    if (g == IntElem{0, 0, 0})
      throw std::invalid_argument("cayley: identity in generating set");
    IntElem gi = iinv(g);
    if (std::find(spec.generators.begin(), spec.generators.end(), gi) ==
        spec.generators.end())
      throw std::invalid_argument("cayley: generating set is not symmetric");
  }
}

// BFS word lengths out to the given radius.
std::unordered_map<IntElem, long long, ElemHash> bfs(const CayleySpec& spec,
                                                     long long radius) {
  std::unordered_map<IntElem, long long, ElemHash> wl;
  std::deque<IntElem> frontier;
  wl[{0, 0, 0}] = 0;
  frontier.push_back({0, 0, 0});
  while (!frontier.empty()) {
    IntElem u = frontier.front();
    frontier.pop_front();
    long long du = wl[u];
    if (du == radius) continue;
    for (const auto& s : spec.generators) {
      IntElem v = imul(u, s);
      if (wl.emplace(v, du + 1).second) frontier.push_back(v);
    }
  }
  return wl;
}

}  // namespace

FiniteMetricSpace generate_ball(const CayleySpec& spec) {
  check_spec(spec);
  if (spec.radius < 0) throw std::invalid_argument("cayley: radius < 0");
  if (spec.radius > spec.cap) {
    // |W_k| grows like k^4 for the Heisenberg group
    double est = 0.5 * std::pow(double(spec.radius), 4.0);
    std::ostringstream os;
    os << "cayley: radius " << spec.radius << " above cap " << spec.cap
       << " (estimated |W_k| ~ " << static_cast<long long>(est) << " points)";
    throw std::invalid_argument(os.str());
  }

  long long k = spec.radius;
  auto wl = bfs(spec, 2 * k);

  std::vector<std::pair<IntElem, long long>> pts;
  for (const auto& [e, d] : wl)
    if (d <= k) pts.push_back({e, d});
  std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second < y.second;
    return x.first < y.first;
  });

  std::size_t n = pts.size();
  FiniteMetricSpace s = FiniteMetricSpace::with_unit_weights(n);
  s.label = "W" + std::to_string(k);
  s.coords.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    s.coords[i] = {double(pts[i].first[0]), double(pts[i].first[1]),
                   double(pts[i].first[2])};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      IntElem diff = imul(iinv(pts[i].first), pts[j].first);
      auto it = wl.find(diff);
      // |u^{-1} v| <= |u| + |v| <= 2k, so the lookup always succeeds
      if (it == wl.end())
        throw std::logic_error("cayley: BFS horizon too small");
      s.d(i, j) = s.d(j, i) = static_cast<double>(it->second);
    }
  }
  return s;
}

long long word_length(const std::array<long long, 3>& g,
                      const CayleySpec& spec) {
  check_spec(spec);
  long long bound = 2 * (std::llabs(g[0]) + std::llabs(g[1])) + 8;
  // crude horizon: enough for the central elements used at desk scale
  bound += 4 * static_cast<long long>(
                   std::ceil(std::sqrt(double(std::llabs(g[2])) + 1.0)));
  auto wl = bfs(spec, bound);
  auto it = wl.find(g);
  if (it == wl.end())
    throw NumericalError("word_length: BFS horizon exhausted");
  return it->second;
}

FiniteMetricSpace sample_cc_metric(int n, double radius, std::uint64_t seed,
                                   double tol) {
  if (n < 2) throw std::invalid_argument("sample_cc_metric: n >= 2 required");
  if (!(radius > 0.0))
    throw std::invalid_argument("sample_cc_metric: radius must be positive");
  Rng rng(seed);
  std::vector<GroupElement> pts;
  pts.reserve(n);
  while (static_cast<int>(pts.size()) < n) {
    double a = rng.uniform(-radius, radius);
    double b = rng.uniform(-radius, radius);
    double z = rng.uniform(-radius * radius / 4.0, radius * radius / 4.0);
    GroupElement p{a, b, z + a * b * 0.5};
    if (koranyi_gauge(p) <= radius) pts.push_back(p);
  }
  FiniteMetricSpace s = FiniteMetricSpace::with_unit_weights(n);
  s.label = "cc_sample";
  s.coords.resize(n);
  for (int i = 0; i < n; ++i) s.coords[i] = {pts[i].a, pts[i].b, pts[i].c};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      s.d(i, j) = s.d(j, i) = cc_distance(pts[i], pts[j], tol);
  return s;
}

}  // namespace heiscut
