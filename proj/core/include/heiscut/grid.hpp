#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "heiscut/bitvec.hpp"
#include "heiscut/cuts.hpp"
#include "heiscut/heisenberg.hpp"

namespace heiscut {

// Vertical half-space: membership depends only on the (a,b)-projection, so
// the set is saturated along cosets of the center.
struct HalfSpace {
  double a0 = 0.0, b0 = 0.0;  // basepoint projection
  double theta = 0.0;         // normal angle in [0, 2pi)

  bool contains(const GroupElement& p) const {
    return std::cos(theta) * (p.a - a0) + std::sin(theta) * (p.b - b0) >= 0.0;
  }
  HalfSpace complemented() const;
};

// Voxel grid over a box in (a,b,c) coordinates. Carries the two horizontal
// line decompositions used by the crossing-count perimeter estimator:
// P-lines run along a at fixed (b,c); Q-lines are the integral curves
// b -> (a, b, c0 + a·b) snapped to the nearest voxel in c (snap error at
// most half a c-cell, since the shift is recomputed per column).
class GridGeometry {
 public:
  GridGeometry(std::array<double, 3> lo, std::array<double, 3> hi,
               std::array<std::size_t, 3> res);

  static std::shared_ptr<const GridGeometry> make_default();

  const std::array<double, 3>& lo() const { return lo_; }
  const std::array<double, 3>& hi() const { return hi_; }
  const std::array<std::size_t, 3>& res() const { return res_; }
  double da() const { return step_[0]; }
  double db() const { return step_[1]; }
  double dc() const { return step_[2]; }
  double voxel_volume() const { return step_[0] * step_[1] * step_[2]; }
  std::size_t num_voxels() const { return res_[0] * res_[1] * res_[2]; }

  std::size_t index(std::size_t ia, std::size_t jb, std::size_t kc) const {
    return (ia * res_[1] + jb) * res_[2] + kc;
  }
  std::array<std::size_t, 3> unindex(std::size_t v) const {
    std::size_t kc = v % res_[2];
    std::size_t rest = v / res_[2];
    return {rest / res_[1], rest % res_[1], kc};
  }
  GroupElement center(std::size_t v) const {
    auto [ia, jb, kc] = unindex(v);
    return {lo_[0] + (ia + 0.5) * step_[0], lo_[1] + (jb + 0.5) * step_[1],
            lo_[2] + (kc + 0.5) * step_[2]};
  }

  // nearest-voxel lookup; nullopt when the point is outside the box
  std::optional<std::size_t> locate(const GroupElement& p) const;

  // integer c-shift of the Q-line passing through column (ia, jb)
  long long q_shift(std::size_t ia, std::size_t jb) const;

  const LineDecomposition& p_lines() const;
  const LineDecomposition& q_lines() const;
  // both families concatenated; partitions the voxels twice over
  const LineDecomposition& horizontal_lines() const;

  bool same_as(const GridGeometry& o) const;

 private:
  std::array<double, 3> lo_, hi_;
  std::array<std::size_t, 3> res_;
  std::array<double, 3> step_;
  mutable std::shared_ptr<LineDecomposition> p_lines_, q_lines_, all_lines_;
};

using GeometryPtr = std::shared_ptr<const GridGeometry>;

// Voxel-discretized subset.
struct GridSet {
  GeometryPtr geom;
  BitVec membership;

  GridSet() = default;
  GridSet(GeometryPtr g, BitVec m) : geom(std::move(g)), membership(std::move(m)) {}

  double measure() const {
    return geom->voxel_volume() * static_cast<double>(membership.count());
  }
  bool contains(std::size_t v) const { return membership.get(v); }
  GridSet complement() const { return {geom, membership.complement()}; }
};

GridSet rasterize(const GeometryPtr& geom,
                  const std::function<bool(const GroupElement&)>& pred);
GridSet rasterize_halfspace(const GeometryPtr& geom, const HalfSpace& hs);

// Scalar samples at voxel centers.
struct ScalarField {
  GeometryPtr geom;
  std::vector<double> values;
};

ScalarField sample_function(const GeometryPtr& geom,
                            const std::function<double(const GroupElement&)>& f);

// Nonnegative per-voxel density (a discrete Radon measure).
struct PerimeterField {
  GeometryPtr geom;
  std::vector<double> density;

  double mass() const;
  double mass_on(const BitVec& region) const;
  PerimeterField& add_scaled(const PerimeterField& other, double scale);
};

// Finite cut measure whose atoms are voxel sets over one shared geometry.
struct GridCutMeasure {
  GeometryPtr geom;
  std::vector<BitVec> atoms;
  std::vector<double> weights;
  std::vector<double> thresholds;  // set when produced by slicing a field

  std::size_t size() const { return atoms.size(); }
  double total_weight() const;
  bool atom_contains(std::size_t k, const GroupElement& p) const;
  // sum_k w_k |chi_k(u) - chi_k(v)| with nearest-voxel membership lookups;
  // throws when a point is outside the box
  double embed_distance(const GroupElement& u, const GroupElement& v) const;
};

// Superlevel-set slicing of a field at `levels` equispaced thresholds
// strictly between min and max. The result is exactly the cut measure of the
// threshold-quantized field, which is also returned for the exactness
// identities.
struct SlicedField {
  GridCutMeasure sigma;
  ScalarField quantized;
};
SlicedField slice_scalar_field(const ScalarField& field, std::size_t levels);

// Line-based variation of a field over both horizontal line families.
double grid_variation(const ScalarField& field);

}  // namespace heiscut
