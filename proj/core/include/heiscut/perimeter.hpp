#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "heiscut/grid.hpp"

namespace heiscut {

// Crossing-count perimeter estimator: every sign change of the membership
// indicator along a P-line or Q-line deposits the line's transverse weight,
// split evenly between the two voxels of the crossing.
PerimeterField perimeter(const GridSet& E);
double perimeter_total(const GridSet& E);
double perimeter_in(const GridSet& E, const BitVec& region);

// Thrown when a ball reaches outside the grid box; carries the fraction of
// its voxels that were cut off.
class BallClippedError : public std::out_of_range {
 public:
  BallClippedError(const std::string& what, double fraction)
      : std::out_of_range(what), clipped_fraction(fraction) {}
  double clipped_fraction;
};

// Relative voxel offsets of a Koranyi ball around a voxel center in the
// a-column ia. The c-extent of the ball depends on the a-coordinate through
// the group shear, hence the per-column cache key.
struct BallOffsets {
  double r = 0.0;
  std::vector<std::int32_t> di, dj, dk;
  std::vector<float> wa, wb;          // horizontal offset coordinates
  std::vector<std::uint16_t> bin;     // angular bin of (wa, wb)
  std::size_t center_index = 0;       // position of the (0,0,0) offset
  std::size_t count() const { return di.size(); }
};

class BallCache {
 public:
  explicit BallCache(GeometryPtr geom, std::size_t max_total_offsets = 8'000'000)
      : geom_(std::move(geom)), cap_(max_total_offsets) {}

  static constexpr int kBins = 2880;

  const BallOffsets& get(double r, std::size_t ia);
  const GeometryPtr& geometry() const { return geom_; }

 private:
  GeometryPtr geom_;
  std::size_t cap_;
  std::size_t total_ = 0;
  std::map<std::pair<long long, std::size_t>, std::shared_ptr<BallOffsets>> map_;
  std::vector<std::pair<long long, std::size_t>> order_;
};

struct AlphaOptions {
  int scan_points = 360;     // coarse scan over the normal angle
  double refine_tol = 1e-4;  // golden-section window in radians
  bool refine = true;
};

struct AlphaResult {
  double value = 0.0;
  HalfSpace argmin;
  std::size_t ball_voxels = 0;
  GroupElement snapped_center;  // alpha is evaluated at voxel centers
};

// Normalized L^1 distance from E to the best vertical half-space through x
// within the Koranyi ball B_r(x), minimized over the normal angle by a
// coarse scan plus golden-section refinement. Throws BallClippedError when
// the ball exits the box.
AlphaResult alpha(const GridSet& E, const GroupElement& x, double r,
                  BallCache& cache, const AlphaOptions& opts = {});
AlphaResult alpha(const GridSet& E, const GroupElement& x, double r,
                  const AlphaOptions& opts = {});

// (theta, mismatch fraction) samples of the angle objective behind alpha.
std::vector<std::pair<double, double>> alpha_scan(const GridSet& E,
                                                  const GroupElement& x,
                                                  double r, BallCache& cache,
                                                  int scan_points = 360);

// Voxel realization of S_{x,r}^{-1}(E) on out_geom: a voxel belongs to the
// result iff x·dilate(center, r) lands in E. Throws BallClippedError when
// lookups leave the source box.
GridSet blow_up(const GridSet& E, const GroupElement& x, double r,
                const GeometryPtr& out_geom);

// Upper bound on the Koranyi distance from x to the box boundary (exact for
// the a/b faces; c faces via the vertical and shear witnesses).
double box_boundary_distance(const GridGeometry& geom, const GroupElement& x);

// whether the voxelized ball B_r(x) stays inside the box; the Bad-set
// boundary clause is its negation
bool ball_fits_box(const GridGeometry& geom, BallCache& cache,
                   const GroupElement& x, double r);

// {R, R/2, R/4, ...} down to the resolution floor; never empty.
std::vector<double> dyadic_scales(double R, double floor);

struct BadSetOptions {
  double r_floor = 0.0;  // effective floor = max(2·max(da,db), r_floor)
  int scan_points = 360;
  double borderline_margin = 0.02;  // refine alpha when |alpha - eps| is small
};

// Voxels x with d(x, box boundary) < R or alpha(E,x,r) > eps at one of the
// sampled scales. With restrict_to set, only those voxels are classified
// (the rest of the mask stays false).
BitVec bad_set(const GridSet& E, double eps, double R,
               std::span<const double> scales, BallCache& cache,
               const BadSetOptions& opts = {},
               const BitVec* restrict_to = nullptr);

// lambda_Sigma: weighted voxel sum of the per-cut perimeter fields.
PerimeterField total_perimeter_measure(const GridCutMeasure& sigma);

struct BadMassReport {
  std::vector<double> R_list;
  std::vector<double> bad_mass;  // Mass(lambda^Bad_{eps,R}) per R
  double total_mass = 0.0;       // Mass(lambda_Sigma)
  double eps = 0.0;
  double r_floor = 0.0;
};

BadMassReport bad_mass_decay(const GridCutMeasure& sigma, double eps,
                             std::span<const double> R_list,
                             const BadSetOptions& opts = {});

struct GoodBadOptions {
  std::size_t max_witness_points = 48;  // sample of closure(B_r(x))
  double r_floor = 0.0;
  int scan_points = 360;
  double borderline_margin = 0.02;
  int hs_check_angles = 8;  // grid verification of the half-space bound
};

struct GoodBadResult {
  std::vector<std::size_t> good, bad;
  double sigma_good = 0.0;           // Sigma(G)
  double c0_measured = 0.0;          // Sigma(G)·delta/r
  double bad_perimeter_ratio = 0.0;  // Sigma-integral of Per(E)(B_r) over B, normalized
  double bad_bound = 0.0;            // max(eps, delta); see notes in README
  bool bad_bound_satisfied = false;
  double hs_lower_c = 0.0;  // min measured r·Per(H)(B_r)/mu(B_2r) at x
};

// Partition of the atoms into good cuts (some witness point of
// closure(B_r(x)) is eps-close to a half-space at every scale up to R0 and
// R0-deep inside the box) and bad cuts. Requires r < R0/2.
GoodBadResult good_bad_cuts(const GridCutMeasure& sigma, const GroupElement& x,
                            double delta, double eps, double r, double R0,
                            BallCache& cache, const GoodBadOptions& opts = {});

struct StraightenedAtom {
  HalfSpace half_space;
  double weight = 0.0;
  double alpha_2r = 0.0;   // attained closeness at scale 2r
  std::size_t source = 0;  // atom index in the input measure
};

struct StraightenResult {
  std::vector<StraightenedAtom> atoms;   // the pushforward measure
  std::vector<std::size_t> demoted;      // good atoms without a 2eps witness
  GoodBadResult partition;
  double mass = 0.0;  // total weight kept
};

// Replace every good cut by its best approximating half-space over witness
// points x' in closure(B_r(x)) at scale 2r; drop the bad cuts. Good atoms
// with no witness achieving alpha <= 2eps are demoted with a warning entry.
StraightenResult straighten(const GridCutMeasure& sigma, const GroupElement& x,
                            double delta, double eps, double r, double R0,
                            BallCache& cache, const GoodBadOptions& opts = {});

struct LipschitzReport {
  double sup_ratio = 0.0;
  std::vector<double> ratios;  // one per sweep entry
};

// sup over the sweep of lambda_Sigma(B_r(x)) / mu(B_r(x)).
LipschitzReport lipschitz_diagnostic(
    const GridCutMeasure& sigma,
    std::span<const std::pair<GroupElement, double>> sweep, BallCache& cache);

}  // namespace heiscut
