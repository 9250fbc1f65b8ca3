#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace heiscut {

// Thrown when an iterative numerical routine cannot reach its target
// accuracy; carries a human-readable diagnostic payload.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Point of the 3-dimensional Heisenberg group in the upper-triangular matrix
// coordinates (a, b, c):
//
//   [ 1 a c ]
//   [ 0 1 b ]
//   [ 0 0 1 ]
struct GroupElement {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

inline GroupElement identity() { return {0.0, 0.0, 0.0}; }

// (a,b,c)·(a',b',c') = (a+a', b+b', c+c'+a·b')
GroupElement multiply(const GroupElement& g, const GroupElement& h);

// (a,b,c)^{-1} = (-a, -b, a·b - c)
GroupElement inverse(const GroupElement& g);

// Graded automorphism (a,b,c) -> (r·a, r·b, r²·c). Requires r > 0.
GroupElement dilate(const GroupElement& g, double r);

// Center coordinate in exponential coordinates: z = c - a·b/2. The gauge and
// the geodesic formulas are stated in these symmetrized coordinates.
inline double symmetrized_center(const GroupElement& g) {
  return g.c - g.a * g.b * 0.5;
}

// Homogeneous norm ((a²+b²)² + 16 z²)^{1/4} with z = c - ab/2. Symmetric
// under inversion and 1-homogeneous under dilation.
double koranyi_gauge(const GroupElement& g);

double koranyi_distance(const GroupElement& g, const GroupElement& h);

// Carnot-Caratheodory distance from the identity, with P,Q orthonormal.
// Geodesics are horizontal lifts of circular arcs; the arc angle solves a
// 1-D equation handled by bracketing + bisection to relative accuracy tol.
double cc_gauge(const GroupElement& g, double tol);

double cc_distance(const GroupElement& g, const GroupElement& h, double tol);

enum class Gauge { Koranyi, CC };

struct BallSpec {
  GroupElement center;
  double radius = 1.0;
  Gauge gauge = Gauge::Koranyi;
};

bool ball_contains(const BallSpec& ball, const GroupElement& p,
                   double cc_tol = 1e-6);

// Exact Lebesgue volume of the unit Koranyi ball: pi²/8.
double koranyi_unit_ball_volume();

// Seeded Monte-Carlo estimate of the Haar volume of a ball.
double monte_carlo_ball_volume(const BallSpec& ball, std::size_t samples,
                               std::uint64_t seed, double cc_tol = 1e-4);

}  // namespace heiscut
