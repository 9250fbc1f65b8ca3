#include "heiscut/heisenberg.hpp"

#include <cmath>
#include <sstream>

#include "heiscut/rng.hpp"

namespace heiscut {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
  return {g.a + h.a, g.b + h.b, g.c + h.c + g.a * h.b};
}

GroupElement inverse(const GroupElement& g) {
  return {-g.a, -g.b, g.a * g.b - g.c};
}

GroupElement dilate(const GroupElement& g, double r) {
  if (!(r > 0.0))
    throw std::invalid_argument("dilate: scale factor must be positive");
  return {r * g.a, r * g.b, r * r * g.c};
}

namespace {

// (x, y, z) of h^{-1}·g in exponential coordinates. Computed from the
// per-point symmetrized centers so that identical points give exact zeros
// (the matrix-coordinate route cancels catastrophically in c).
struct RelExp {
  double x, y, z;
};

RelExp relative_exponential(const GroupElement& g, const GroupElement& h) {
  double zg = symmetrized_center(g);
  double zh = symmetrized_center(h);
  return {g.a - h.a, g.b - h.b,
          zg - zh - 0.5 * (h.a * g.b - h.b * g.a)};
}

double koranyi_gauge_exp(double x, double y, double z) {
  double rho2 = x * x + y * y;
  return std::pow(rho2 * rho2 + 16.0 * z * z, 0.25);
}

}  // namespace

double koranyi_gauge(const GroupElement& g) {
  return koranyi_gauge_exp(g.a, g.b, symmetrized_center(g));
}

double koranyi_distance(const GroupElement& g, const GroupElement& h) {
  RelExp w = relative_exponential(g, h);
  return koranyi_gauge_exp(w.x, w.y, w.z);
}

namespace {

// Area swept between a circular arc of turning angle phi and its chord,
// normalized by the squared chord length: F(phi) = (phi - sin phi)/(8 sin²(phi/2)).
// Increasing on (0, 2pi), F(0+) = 0, F(2pi-) = +inf.
double arc_area_ratio(double phi) {
  if (phi < 1e-4) return phi / 12.0 * (1.0 + phi * phi / 30.0);
  double s = std::sin(0.5 * phi);
  return (phi - std::sin(phi)) / (8.0 * s * s);
}

// Arc length of the circular arc with chord rho and turning angle phi.
double arc_length(double rho, double phi) {
  if (phi < 1e-8) return rho;
  return rho * (0.5 * phi) / std::sin(0.5 * phi);
}

}  // namespace

namespace {

double cc_from_exp(double rho, double z, double tol);

}  // namespace

double cc_gauge(const GroupElement& g, double tol) {
  return cc_from_exp(std::hypot(g.a, g.b),
                     std::fabs(symmetrized_center(g)), tol);
}

namespace {

double cc_from_exp(double rho, double z, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("cc_gauge: tol must be positive");

  if (rho == 0.0 && z == 0.0) return 0.0;
  // Full circle enclosing area z.
  if (rho == 0.0) return 2.0 * std::sqrt(kPi * z);
  // Straight horizontal segment.
  if (z == 0.0 || z < rho * rho * 1e-15) return rho;

  double target = z / (rho * rho);

  // Bracket the arc angle. F is increasing; push hi toward 2pi until it
  // dominates the target.
  double lo = 0.0;
  double hi = kTwoPi - 1e-3;
  int guard = 0;
  while (arc_area_ratio(hi) < target) {
    hi = kTwoPi - (kTwoPi - hi) / 8.0;
    if (++guard > 200) {
      std::ostringstream os;
      os << "cc_gauge: failed to bracket arc angle (rho=" << rho << ", z=" << z
         << ", target=" << target << ", last F(hi)=" << arc_area_ratio(hi)
         << ")";
      throw NumericalError(os.str());
    }
  }

  // Bisect on phi until the induced length bracket is within relative tol.
  for (int it = 0; it < 400; ++it) {
    double mid = 0.5 * (lo + hi);
    if (arc_area_ratio(mid) < target)
      lo = mid;
    else
      hi = mid;
    double llo = arc_length(rho, lo);
    double lhi = arc_length(rho, hi);
    if (lhi - llo <= tol * llo) return 0.5 * (llo + lhi);
  }
  std::ostringstream os;
  os << "cc_gauge: bisection did not converge to relative tol " << tol
     << " (rho=" << rho << ", z=" << z << ")";
  throw NumericalError(os.str());
}

}  // namespace

double cc_distance(const GroupElement& g, const GroupElement& h, double tol) {
  RelExp w = relative_exponential(g, h);
  return cc_from_exp(std::hypot(w.x, w.y), std::fabs(w.z), tol);
}

bool ball_contains(const BallSpec& ball, const GroupElement& p, double cc_tol) {
  if (ball.gauge == Gauge::Koranyi)
    return koranyi_distance(p, ball.center) <= ball.radius;
  return cc_distance(p, ball.center, cc_tol) <= ball.radius;
}

double koranyi_unit_ball_volume() { return kPi * kPi / 8.0; }

double monte_carlo_ball_volume(const BallSpec& ball, std::size_t samples,
                               std::uint64_t seed, double cc_tol) {
  if (samples == 0) return 0.0;
  // Sample a bounding box in symmetrized coordinates. For both gauges the
  // ball satisfies |(a,b)| <= r and |z| <= r²/4 (cc: the (a,b)-projection of
  // a horizontal path is length-preserving, and max |z| at rho=0 is r²/4pi).
  double r = ball.radius;
  double abox = 1.0000001 * r;
  double zbox = 0.2500001 * r * r;
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    double wa = rng.uniform(-abox, abox);
    double wb = rng.uniform(-abox, abox);
    double wz = rng.uniform(-zbox, zbox);
    GroupElement w{wa, wb, wz + wa * wb * 0.5};
    GroupElement p = multiply(ball.center, w);
    if (ball_contains(ball, p, cc_tol)) ++hits;
  }
  double box_vol = (2 * abox) * (2 * abox) * (2 * zbox);
  return box_vol * static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace heiscut
