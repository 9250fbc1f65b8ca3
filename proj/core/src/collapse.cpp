#include "heiscut/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heiscut/heisenberg.hpp"
#include "heiscut/rng.hpp"

namespace heiscut {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double CutFamily::total_weight() const {
  double s = 0.0;
  if (grid) {
    if (grid_atoms.empty()) {
      s += grid->total_weight();
    } else {
      for (std::size_t k : grid_atoms) s += grid->weights[k];
    }
  }
  for (const auto& [h, w] : half_spaces) s += w;
  return s;
}

double CutFamily::displacement(const GroupElement& u,
                               const GroupElement& v) const {
  GroupElement pu = u, pv = v;
  if (snap_geom) {
    auto iu = snap_geom->locate(u);
    auto iv = snap_geom->locate(v);
    if (!iu || !iv)
      throw std::out_of_range("cut family: point outside the snap grid");
    pu = snap_geom->center(*iu);
    pv = snap_geom->center(*iv);
  }
  double s = 0.0;
  if (grid) {
    auto vu = grid->geom->locate(pu);
    auto vv = grid->geom->locate(pv);
    if (!vu || !vv)
      throw std::out_of_range("cut family: point outside the grid box");
    if (grid_atoms.empty()) {
      for (std::size_t k = 0; k < grid->size(); ++k)
        if (grid->atoms[k].get(*vu) != grid->atoms[k].get(*vv))
          s += grid->weights[k];
    } else {
      for (std::size_t k : grid_atoms)
        if (grid->atoms[k].get(*vu) != grid->atoms[k].get(*vv))
          s += grid->weights[k];
    }
  }
  for (const auto& [h, w] : half_spaces)
    if (h.contains(pu) != h.contains(pv)) s += w;
  return s;
}

namespace {

double fit_slope(const std::vector<double>& t, const std::vector<double>& rho,
                 double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < floor || !(rho[i] > 0.0)) continue;
    double lx = std::log(t[i]), ly = std::log(rho[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return 0.0;
  double denom = m * sxx - sx * sx;
  return denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
}

CollapseReport collapse_along(const CutFamily& family, const GroupElement& x,
                              std::vector<double> t_list,
                              const CollapseOptions& opts, bool center) {
  CollapseReport rep;
  rep.basepoint = x;
  rep.direction = center ? "center" : "horizontal";
  rep.t_list = std::move(t_list);

  const GridGeometry* g =
      family.grid ? family.grid->geom.get()
                  : (family.snap_geom ? family.snap_geom.get() : nullptr);
  double da = g ? g->da() : 0.0;
  double db = g ? g->db() : 0.0;
  double dc = g ? g->dc() : 0.0;

  if (opts.resolution_floor >= 0.0) {
    rep.resolution_floor = opts.resolution_floor;
  } else if (g) {
    // displacements under ~2 cells of the probed axis are voxel aliasing
    rep.resolution_floor = center ? 2.0 * dc : 2.0 * da;
  }

  std::vector<GroupElement> offsets;
  if (g) {
    for (int i = -opts.neighborhood.ka; i <= opts.neighborhood.ka; ++i)
      for (int j = -opts.neighborhood.kb; j <= opts.neighborhood.kb; ++j)
        for (int k = -opts.neighborhood.kc; k <= opts.neighborhood.kc; ++k)
          offsets.push_back({i * da, j * db, k * dc});
  } else {
    offsets.push_back({0.0, 0.0, 0.0});
  }

  for (double t : rep.t_list) {
    GroupElement gt = center ? GroupElement{0.0, 0.0, t}
                             : GroupElement{t, 0.0, 0.0};
    double num = 0.0;
    for (const auto& o : offsets) {
      GroupElement xo{x.a + o.a, x.b + o.b, x.c + o.c};
      GroupElement yo = multiply(xo, gt);
      num += family.displacement(xo, yo);
    }
    num /= static_cast<double>(offsets.size());
    double den = cc_gauge(gt, opts.cc_tol);
    rep.numerators.push_back(num);
    rep.denominators.push_back(den);
    rep.ratios.push_back(den > 0.0 ? num / den : 0.0);
  }
  rep.slope = fit_slope(rep.t_list, rep.ratios, rep.resolution_floor);
  return rep;
}

}  // namespace

CollapseReport center_collapse(const CutFamily& family, const GroupElement& x,
                               std::vector<double> t_list,
                               const CollapseOptions& opts) {
  return collapse_along(family, x, std::move(t_list), opts, true);
}

CollapseReport horizontal_control(const CutFamily& family,
                                  const GroupElement& x,
                                  std::vector<double> t_list,
                                  const CollapseOptions& opts) {
  return collapse_along(family, x, std::move(t_list), opts, false);
}

std::vector<std::pair<HalfSpace, double>> make_halfspace_control(
    std::size_t count, std::uint64_t seed, double spread) {
  Rng rng(seed);
  std::vector<std::pair<HalfSpace, double>> out;
  out.reserve(count);
  double w = 1.0 / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    double theta = 2.0 * kPi * static_cast<double>(i) / count;
    double depth = rng.uniform(-spread, spread);
    // basepoint shifted along the normal
    HalfSpace h{depth * std::cos(theta), depth * std::sin(theta), theta};
    out.push_back({h, w});
  }
  return out;
}

namespace {

// Kronecker low-discrepancy sequence on [0,1)^6 (one slot per coordinate of
// the pair), with a seed-dependent starting shift.
struct QuasiPairs {
  std::array<double, 6> alpha{};
  std::array<double, 6> state{};

  explicit QuasiPairs(std::uint64_t seed) {
    // fractional powers of the generalized golden ratio for d=6
    double phi = 1.1673039782614187;  // root of x^7 = x + 1
    double a = 1.0;
    Rng rng(seed);
    for (int k = 0; k < 6; ++k) {
      a /= phi;
      alpha[k] = a;
      state[k] = rng.uniform();
    }
  }

  std::array<double, 6> next() {
    for (int k = 0; k < 6; ++k) {
      state[k] += alpha[k];
      if (state[k] >= 1.0) state[k] -= 1.0;
    }
    return state;
  }
};

// map three unit-cube coordinates to the Koranyi unit ball at e (rejection)
bool to_unit_ball(double u0, double u1, double u2, GroupElement& out) {
  double a = 2.0 * u0 - 1.0;
  double b = 2.0 * u1 - 1.0;
  double z = 0.5 * u2 - 0.25;
  double rho2 = a * a + b * b;
  if (rho2 * rho2 + 16.0 * z * z > 1.0) return false;
  out = {a, b, z + a * b * 0.5};
  return true;
}

}  // namespace

ScaleReport scale_comparison(const GridCutMeasure& sigma, const GroupElement& x,
                             std::vector<double> r_list, double delta,
                             double eps, const ScaleComparisonOptions& opts) {
  ScaleReport rep;
  rep.basepoint = x;
  rep.delta = delta;
  rep.eps = eps;
  rep.seed = opts.seed;
  rep.pairs = opts.pairs;

  BallCache cache(sigma.geom);
  double mu_b1 = koranyi_unit_ball_volume();

  for (double r : r_list) {
    ScaleEntry entry;
    entry.r = r;
    entry.R0 = opts.R0_factor * r;
    StraightenResult st;
    try {
      st = straighten(sigma, x, delta, eps, r, entry.R0, cache, opts.good_bad);
    } catch (const std::exception& ex) {
      entry.skipped = true;
      entry.skip_reason = ex.what();
      rep.entries.push_back(entry);
      continue;
    }
    entry.sigma_good = st.partition.sigma_good;
    entry.n_good = st.partition.good.size();
    entry.n_bad = st.partition.bad.size();
    entry.n_demoted = st.demoted.size();
    entry.mass_straightened = st.mass;

    // kept atoms form the effective good family; bad + demoted are its
    // complement, so d_Sigma = d_good + d_bad holds exactly per pair
    CutFamily good;
    good.grid = &sigma;
    good.snap_geom = sigma.geom;
    for (const auto& atom : st.atoms) good.grid_atoms.push_back(atom.source);
    std::sort(good.grid_atoms.begin(), good.grid_atoms.end());

    CutFamily hat;
    hat.snap_geom = sigma.geom;
    for (const auto& atom : st.atoms)
      hat.half_spaces.push_back({atom.half_space, atom.weight});

    CutFamily full;
    full.grid = &sigma;
    full.snap_geom = sigma.geom;

    QuasiPairs qp(opts.seed);
    double sum_D = 0.0, sum_good = 0.0, sum_bad = 0.0;
    std::size_t got = 0;
    std::size_t guard = 0;
    while (got < opts.pairs && guard < 1000 * opts.pairs) {
      ++guard;
      auto u6 = qp.next();
      GroupElement u, v;
      if (!to_unit_ball(u6[0], u6[1], u6[2], u)) continue;
      if (!to_unit_ball(u6[3], u6[4], u6[5], v)) continue;
      GroupElement su = multiply(x, dilate(u, r));
      GroupElement sv = multiply(x, dilate(v, r));
      double d_full, d_good, d_hat;
      try {
        d_full = full.displacement(su, sv);
        d_good = good.displacement(su, sv);
        d_hat = hat.displacement(su, sv);
      } catch (const std::out_of_range&) {
        continue;  // sample fell off the box after snapping
      }
      double d_bad = d_full - d_good;
      sum_D += std::fabs(d_full - d_hat);
      sum_good += std::fabs(d_good - d_hat);
      sum_bad += std::fabs(d_bad);
      ++got;
    }
    if (got == 0) {
      entry.skipped = true;
      entry.skip_reason = "no valid sample pairs";
      rep.entries.push_back(entry);
      continue;
    }
    double norm = mu_b1 * mu_b1 / (r * static_cast<double>(got));
    entry.D = sum_D * norm;
    entry.D_good = sum_good * norm;
    entry.D_bad = sum_bad * norm;
    entry.triangle_ok = entry.D <= entry.D_good + entry.D_bad + 1e-9;
    rep.entries.push_back(entry);
  }
  return rep;
}

L1Map build_moving_char(std::size_t n) {
  if (n < 2) throw std::invalid_argument("build_moving_char: n >= 2 required");
  L1Map f = L1Map::zeros(n, n - 1);
  double inv = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j + 1 < n; ++j) f.target_weights[j] = inv;
  // f(t_i) = chi_{[0, t_i]} sampled at s_j = (j+1)/n, t_i = i/n
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j + 1 < n; ++j)
      f.at(i, j) = (static_cast<double>(j + 1) <= static_cast<double>(i)) ? 1.0
                                                                          : 0.0;
  return f;
}

double moving_char_check(std::size_t n) {
  L1Map f = build_moving_char(n);
  CutMeasure sigma = cut_measure_from_map(f);
  std::vector<double> d = cut_metric(sigma);
  double inv = 1.0 / static_cast<double>(n);
  double max_err = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double expect = std::fabs(static_cast<double>(i) - static_cast<double>(j)) * inv;
      max_err = std::max(max_err, std::fabs(d[i * n + j] - expect));
    }
  return max_err;
}

}  // namespace heiscut
