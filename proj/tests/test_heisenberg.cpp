#include <array>
#include <stdexcept>
#include <vector>
#include <cmath>

#include "doctest.h"
#include "heiscut/heisenberg.hpp"
#include "heiscut/rng.hpp"

using namespace heiscut;

namespace {

constexpr double kPi = 3.14159265358979323846;

// 3x3 matrix oracle for the group operations
using Mat = std::array<double, 9>;

Mat to_matrix(const GroupElement& g) {
  return {1, g.a, g.c, 0, 1, g.b, 0, 0, 1};
}

Mat mat_mul(const Mat& x, const Mat& y) {
  Mat z{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += x[i * 3 + k] * y[k * 3 + j];
      z[i * 3 + j] = s;
    }
  return z;
}

GroupElement from_matrix(const Mat& m) { return {m[1], m[5], m[2]}; }

GroupElement random_element(Rng& rng, double scale = 2.0) {
  return {rng.uniform(-scale, scale), rng.uniform(-scale, scale),
          rng.uniform(-scale, scale)};
}

bool close(const GroupElement& g, const GroupElement& h, double tol = 1e-12) {
  return std::fabs(g.a - h.a) <= tol && std::fabs(g.b - h.b) <= tol &&
         std::fabs(g.c - h.c) <= tol;
}

// Admissible-path oracle: a piecewise-linear plane curve from (0,0) to the
// (a,b)-projection lifts horizontally, gaining c = \int a db (the trapezoid
// rule is exact on segments), and its plane length is its cc length. The
// length is minimized by projected gradient descent on the vertices with the
// swept integral held fixed, so the result both upper-bounds the cc distance
// and approaches it.
double polyline_cc_oracle(const GroupElement& target, int segments) {
  constexpr double pi = 3.14159265358979323846;
  int m = segments - 1;  // movable vertices
  std::vector<double> ax(segments + 1), by(segments + 1);
  double chord = std::hypot(target.a, target.b);

  auto area_of = [&]() {
    double area = 0;
    for (int i = 0; i < segments; ++i)
      area += 0.5 * (ax[i] + ax[i + 1]) * (by[i + 1] - by[i]);
    return area;
  };
  auto length_of = [&]() {
    double len = 0;
    for (int i = 0; i < segments; ++i)
      len += std::hypot(ax[i + 1] - ax[i], by[i + 1] - by[i]);
    return len;
  };

  if (chord > 1e-12) {
    // straight chord plus a perpendicular sine bump; secant on the amplitude
    // until the swept integral matches the target
    auto set_bump = [&](double h) {
      for (int i = 0; i <= segments; ++i) {
        double t = double(i) / segments;
        double s = std::sin(pi * t);
        ax[i] = target.a * t - h * s * target.b / chord;
        by[i] = target.b * t + h * s * target.a / chord;
      }
    };
    double h0 = 0, h1 = std::max(0.5 * chord, std::sqrt(std::fabs(target.c)));
    set_bump(h0);
    double a0 = area_of() - target.c;
    set_bump(h1);
    double a1 = area_of() - target.c;
    for (int it = 0; it < 80 && std::fabs(a1) > 1e-14; ++it) {
      double h2 = h1 - a1 * (h1 - h0) / (a1 - a0 + 1e-300);
      h0 = h1;
      a0 = a1;
      h1 = h2;
      set_bump(h1);
      a1 = area_of() - target.c;
    }
  } else {
    double R = std::sqrt(std::fabs(target.c) / pi);
    double sign = target.c >= 0 ? 1.0 : -1.0;
    for (int i = 0; i <= segments; ++i) {
      double phi = 2.0 * pi * double(i) / segments;
      ax[i] = R * std::sin(phi);
      by[i] = sign * R * (1.0 - std::cos(phi));
    }
  }

  std::vector<double> gLa(m), gLb(m), gAa(m), gAb(m);
  double step =
      0.2 * std::max(chord, std::sqrt(std::fabs(target.c)) + 1e-9) / segments;
  double prev_len = length_of();
  for (int iter = 0; iter < 20000; ++iter) {
    for (int i = 1; i <= m; ++i) {
      double dxp = ax[i] - ax[i - 1], dyp = by[i] - by[i - 1];
      double dxn = ax[i + 1] - ax[i], dyn = by[i + 1] - by[i];
      double lp = std::hypot(dxp, dyp) + 1e-300;
      double ln = std::hypot(dxn, dyn) + 1e-300;
      gLa[i - 1] = dxp / lp - dxn / ln;
      gLb[i - 1] = dyp / lp - dyn / ln;
      gAa[i - 1] = 0.5 * (by[i + 1] - by[i - 1]);
      gAb[i - 1] = -0.5 * (ax[i + 1] - ax[i - 1]);
    }
    double dot = 0, nA = 0;
    for (int i = 0; i < m; ++i) {
      dot += gLa[i] * gAa[i] + gLb[i] * gAb[i];
      nA += gAa[i] * gAa[i] + gAb[i] * gAb[i];
    }
    double mu = nA > 1e-300 ? dot / nA : 0.0;
    for (int i = 0; i < m; ++i) {
      ax[i + 1] -= step * (gLa[i] - mu * gAa[i]);
      by[i + 1] -= step * (gLb[i] - mu * gAb[i]);
    }
    for (int c = 0; c < 2; ++c) {
      double err = target.c - area_of();
      if (std::fabs(err) < 1e-15) break;
      for (int i = 1; i <= m; ++i) {
        gAa[i - 1] = 0.5 * (by[i + 1] - by[i - 1]);
        gAb[i - 1] = -0.5 * (ax[i + 1] - ax[i - 1]);
      }
      double n2 = 0;
      for (int i = 0; i < m; ++i) n2 += gAa[i] * gAa[i] + gAb[i] * gAb[i];
      if (n2 < 1e-300) break;
      for (int i = 0; i < m; ++i) {
        ax[i + 1] += err / n2 * gAa[i];
        by[i + 1] += err / n2 * gAb[i];
      }
    }
    if (iter % 200 == 199) {
      double len = length_of();
      if (len > prev_len - 1e-14) step *= 0.7;
      prev_len = len;
      if (step < 1e-10) break;
    }
  }
  if (std::fabs(area_of() - target.c) > 1e-6) return 1e100;
  return length_of();
}

}  // namespace

TEST_CASE("group law matches the matrix model") {
  GroupElement x{1, 0, 0}, y{0, 1, 0};
  CHECK(close(multiply(x, y), {1, 1, 1}));

  // four-fold product x y x^{-1} y^{-1} realizes the central element
  GroupElement w = multiply(multiply(multiply(x, y), inverse(x)), inverse(y));
  CHECK(close(w, {0, 0, 1}));

  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    GroupElement g = random_element(rng), h = random_element(rng);
    GroupElement viamat = from_matrix(mat_mul(to_matrix(g), to_matrix(h)));
    CHECK(close(multiply(g, h), viamat));
  }
}

TEST_CASE("identity and inverses") {
  Rng rng(8);
  GroupElement e = identity();
  for (int t = 0; t < 100; ++t) {
    GroupElement g = random_element(rng);
    CHECK(close(multiply(e, g), g));
    CHECK(close(multiply(g, e), g));
    CHECK(close(multiply(g, inverse(g)), e));
    CHECK(close(multiply(inverse(g), g), e));
  }
  CHECK(close(inverse(e), e));
  CHECK(close(inverse({1, 0, 0}), {-1, 0, 0}));
  CHECK(close(inverse({1, 1, 1}), {-1, -1, 0}));
}

TEST_CASE("group axioms on random triples") {
  Rng rng(9);
  for (int t = 0; t < 10000; ++t) {
    GroupElement g = random_element(rng), h = random_element(rng),
                 k = random_element(rng);
    GroupElement lhs = multiply(multiply(g, h), k);
    GroupElement rhs = multiply(g, multiply(h, k));
    CHECK(close(lhs, rhs, 1e-12));
  }
}

TEST_CASE("dilation grading and automorphism") {
  CHECK(close(dilate({1, 1, 1}, 1.0), {1, 1, 1}));
  CHECK(close(dilate({1, 1, 1}, 2.0), {2, 2, 4}));
  CHECK_THROWS_AS(dilate({1, 1, 1}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dilate({1, 1, 1}, -2.0), std::invalid_argument);

  Rng rng(10);
  for (int t = 0; t < 1000; ++t) {
    GroupElement g = random_element(rng), h = random_element(rng);
    double r = std::exp(rng.uniform(-1.5, 1.5));
    CHECK(close(dilate(dilate(g, r), 1.0 / r), g, 1e-10));
    CHECK(close(dilate(multiply(g, h), r), multiply(dilate(g, r), dilate(h, r)),
                1e-12));
  }
}

TEST_CASE("koranyi gauge basics") {
  Rng rng(11);
  CHECK(koranyi_distance({0.3, -0.2, 0.9}, {0.3, -0.2, 0.9}) == 0.0);
  for (double t : {0.25, -1.5, 3.0})
    CHECK(koranyi_distance(identity(), {t, 0, 0}) == doctest::Approx(std::fabs(t)).epsilon(1e-14));
  for (int t = 0; t < 2000; ++t) {
    GroupElement g = random_element(rng), h = random_element(rng);
    double r = std::exp(rng.uniform(-1.0, 1.0));
    // symmetry, homogeneity, left invariance
    CHECK(koranyi_distance(g, h) ==
          doctest::Approx(koranyi_distance(h, g)).epsilon(1e-12));
    CHECK(koranyi_distance(dilate(g, r), dilate(h, r)) ==
          doctest::Approx(r * koranyi_distance(g, h)).epsilon(1e-10));
    GroupElement z = random_element(rng);
    CHECK(koranyi_distance(multiply(z, g), multiply(z, h)) ==
          doctest::Approx(koranyi_distance(g, h)).epsilon(1e-9));
  }
}

TEST_CASE("koranyi triangle inequality") {
  Rng rng(12);
  for (int t = 0; t < 5000; ++t) {
    GroupElement g = random_element(rng), h = random_element(rng),
                 k = random_element(rng);
    double dgh = koranyi_distance(g, h);
    double dgk = koranyi_distance(g, k);
    double dkh = koranyi_distance(k, h);
    CHECK(dgh <= dgk + dkh + 1e-10);
  }
}

TEST_CASE("cc distance: horizontal segments and center circles") {
  for (double t : {0.1, 0.7, 2.0}) {
    CHECK(cc_distance(identity(), {t, 0, 0}, 1e-10) ==
          doctest::Approx(t).epsilon(1e-8));
    CHECK(cc_distance(identity(), {0, t, 0}, 1e-10) ==
          doctest::Approx(t).epsilon(1e-8));
  }
  for (double s : {0.05, 0.25, 1.0}) {
    // optimal lift is a full circle of enclosed area s
    CHECK(cc_gauge({0, 0, s}, 1e-10) ==
          doctest::Approx(2.0 * std::sqrt(kPi * s)).epsilon(1e-8));
  }
}

TEST_CASE("cc distance against the polyline oracle") {
  // oracle lengths are admissible, so cc <= oracle <= cc * (1 + slack)
  std::vector<GroupElement> targets = {
      {0, 0, 0.25}, {1, 0, 0.3}, {0.5, -0.7, 0.1}, {0.9, 0.4, -0.35}};
  for (const auto& g : targets) {
    double d = cc_gauge(g, 1e-9);
    double oracle = polyline_cc_oracle(g, 24);
    CHECK(d <= oracle + 1e-6);
    CHECK(oracle <= d * 1.05);
  }
}

TEST_CASE("cc homogeneity and center scaling") {
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    GroupElement g = random_element(rng, 1.0), h = random_element(rng, 1.0);
    double r = std::exp(rng.uniform(-1.0, 1.0));
    double tol = 1e-8;
    double d1 = cc_distance(dilate(g, r), dilate(h, r), tol);
    double d2 = cc_distance(g, h, tol);
    CHECK(d1 == doctest::Approx(r * d2).epsilon(4 * tol));
  }
  // degree-2 grading of the center: cc(e,(0,0,t))/sqrt(t) constant
  double tol = 1e-9;
  double base = cc_gauge({0, 0, 1.0}, tol);
  for (double t : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    double ratio = cc_gauge({0, 0, t}, tol) / std::sqrt(t);
    CHECK(ratio == doctest::Approx(base).epsilon(4 * tol));
  }
}

TEST_CASE("cc left invariance") {
  Rng rng(14);
  for (int t = 0; t < 30; ++t) {
    GroupElement g = random_element(rng, 1.0), h = random_element(rng, 1.0),
                 z = random_element(rng, 1.0);
    double tol = 1e-8;
    CHECK(cc_distance(multiply(z, g), multiply(z, h), tol) ==
          doctest::Approx(cc_distance(g, h, tol)).epsilon(1e-6));
  }
}

TEST_CASE("koranyi and cc are bi-Lipschitz equivalent") {
  Rng rng(15);
  double lo = 1e100, hi = 0.0;
  for (int t = 0; t < 10000; ++t) {
    GroupElement g = random_element(rng, 1.0), h = random_element(rng, 1.0);
    double k = koranyi_distance(g, h);
    double c = cc_distance(g, h, 1e-6);
    if (c < 1e-9) continue;
    double ratio = k / c;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  // the center direction attains 1/sqrt(pi), horizontal attains 1
  CHECK(lo > 0.5);
  CHECK(lo < 0.62);
  CHECK(hi > 0.95);
  CHECK(hi <= 1.0 + 1e-6);

  // band is stable across a different sample
  Rng rng2(16);
  double lo2 = 1e100, hi2 = 0.0;
  for (int t = 0; t < 10000; ++t) {
    GroupElement g = random_element(rng2, 1.0), h = random_element(rng2, 1.0);
    double c = cc_distance(g, h, 1e-6);
    if (c < 1e-9) continue;
    double ratio = koranyi_distance(g, h) / c;
    lo2 = std::min(lo2, ratio);
    hi2 = std::max(hi2, ratio);
  }
  CHECK(std::fabs(lo - lo2) < 0.05);
  CHECK(std::fabs(hi - hi2) < 0.05);
}

TEST_CASE("ball volume homogeneity") {
  for (Gauge gauge : {Gauge::Koranyi, Gauge::CC}) {
    BallSpec b1{identity(), 1.0, gauge};
    BallSpec b2{identity(), 1.7, gauge};
    std::size_t n = 200000;
    double v1 = monte_carlo_ball_volume(b1, n, 21);
    double v2 = monte_carlo_ball_volume(b2, n, 22);
    double scale = std::pow(1.7, 4.0);
    CHECK(v2 / v1 == doctest::Approx(scale).epsilon(0.03));
  }
  // the Koranyi unit ball volume has a closed form
  double v = monte_carlo_ball_volume({identity(), 1.0, Gauge::Koranyi}, 400000, 23);
  CHECK(v == doctest::Approx(koranyi_unit_ball_volume()).epsilon(0.02));
}

TEST_CASE("cc rejects bad tolerance") {
  CHECK_THROWS_AS(cc_gauge({1, 1, 1}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cc_gauge({1, 1, 1}, -1.0), std::invalid_argument);
}
