#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heiscut/grid.hpp"
#include "heiscut/perimeter.hpp"

namespace heiscut {

// Atom family whose memberships can be evaluated at points: grid cuts,
// half-space cuts, or both. With snap_geom set, every point is snapped to
// its voxel center before any membership test, so grid and half-space atoms
// see identically quantized positions.
struct CutFamily {
  const GridCutMeasure* grid = nullptr;
  std::vector<std::size_t> grid_atoms;  // indices into grid; empty = all
  std::vector<std::pair<HalfSpace, double>> half_spaces;
  GeometryPtr snap_geom;

  double total_weight() const;
  // sum_k w_k |chi_k(u) - chi_k(v)|
  double displacement(const GroupElement& u, const GroupElement& v) const;
};

struct NeighborhoodSpec {
  int ka = 1, kb = 1, kc = 2;  // voxel offsets per axis, (2k+1) each
};

struct CollapseOptions {
  NeighborhoodSpec neighborhood;
  double cc_tol = 1e-9;
  double resolution_floor = -1.0;  // <0: derived from the grid step
};

struct CollapseReport {
  GroupElement basepoint;
  std::string direction;  // "center" or "horizontal"
  std::vector<double> t_list;
  std::vector<double> ratios;
  std::vector<double> numerators;
  std::vector<double> denominators;
  double slope = 0.0;  // log-log fit over t at or above the floor
  double resolution_floor = 0.0;
};

// Normalized displacement ratios along the center direction: the atoms are
// probed at x·(0,0,t) against x, averaged over a voxel neighborhood, and
// divided by the cc displacement (which is independent of x by left
// invariance).
CollapseReport center_collapse(const CutFamily& family, const GroupElement& x,
                               std::vector<double> t_list,
                               const CollapseOptions& opts = {});

// Negative control along the right-translated horizontal direction
// x·(t,0,0), whose cc displacement is exactly t.
CollapseReport horizontal_control(const CutFamily& family,
                                  const GroupElement& x,
                                  std::vector<double> t_list,
                                  const CollapseOptions& opts = {});

// Half-space control family: equispaced normal angles through scattered
// basepoints with uniform weights.
std::vector<std::pair<HalfSpace, double>> make_halfspace_control(
    std::size_t count, std::uint64_t seed, double spread = 0.5);

struct ScaleComparisonOptions {
  std::uint64_t seed = 1;
  std::size_t pairs = 10000;
  double R0_factor = 2.05;  // R0 = factor·r, satisfying r < R0/2
  GoodBadOptions good_bad;
};

struct ScaleEntry {
  double r = 0.0, R0 = 0.0;
  bool skipped = false;
  std::string skip_reason;
  double D = 0.0;       // normalized discrepancy of the straightened metric
  double D_good = 0.0;  // good-part term
  double D_bad = 0.0;   // bad-part term
  bool triangle_ok = false;
  double sigma_good = 0.0;
  std::size_t n_good = 0, n_bad = 0, n_demoted = 0;
  double mass_straightened = 0.0;
};

struct ScaleReport {
  GroupElement basepoint;
  double delta = 0.0, eps = 0.0;
  std::uint64_t seed = 0;
  std::size_t pairs = 0;
  std::vector<ScaleEntry> entries;
};

// For each scale r: straighten Sigma at (x, delta, eps, r, R0), pull both
// metrics back by S_{x,r}, normalize by 1/r and integrate the discrepancy
// over B_1(e)×B_1(e) with fixed-seed quasi-random pairs. The good/bad terms
// reported per scale bound D by the triangle inequality.
ScaleReport scale_comparison(const GridCutMeasure& sigma, const GroupElement& x,
                             std::vector<double> r_list, double delta,
                             double eps, const ScaleComparisonOptions& opts = {});

// The discretized moving characteristic function on n points t_i = i/n with
// n-1 target coordinates of weight 1/n; an exact isometry onto its image.
L1Map build_moving_char(std::size_t n);

// max over pairs of | d_f(t_i,t_j) - |t_i - t_j| | after slicing.
double moving_char_check(std::size_t n);

}  // namespace heiscut
