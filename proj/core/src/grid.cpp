#include "heiscut/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heiscut {

HalfSpace HalfSpace::complemented() const {
  HalfSpace h = *this;
  h.theta = theta >= 3.14159265358979323846 ? theta - 3.14159265358979323846
                                            : theta + 3.14159265358979323846;
  return h;
}

GridGeometry::GridGeometry(std::array<double, 3> lo, std::array<double, 3> hi,
                           std::array<std::size_t, 3> res)
    : lo_(lo), hi_(hi), res_(res) {
  for (int k = 0; k < 3; ++k) {
    if (!(hi_[k] > lo_[k]))
      throw std::invalid_argument("grid geometry: empty box extent");
    if (res_[k] == 0)
      throw std::invalid_argument("grid geometry: zero resolution");
    step_[k] = (hi_[k] - lo_[k]) / static_cast<double>(res_[k]);
  }
}

std::shared_ptr<const GridGeometry> GridGeometry::make_default() {
  return std::make_shared<GridGeometry>(
      std::array<double, 3>{-1.0, -1.0, -1.0},
      std::array<double, 3>{1.0, 1.0, 1.0},
      std::array<std::size_t, 3>{96, 96, 192});
}

std::optional<std::size_t> GridGeometry::locate(const GroupElement& p) const {
  double fa = (p.a - lo_[0]) / step_[0];
  double fb = (p.b - lo_[1]) / step_[1];
  double fc = (p.c - lo_[2]) / step_[2];
  if (fa < 0.0 || fb < 0.0 || fc < 0.0) return std::nullopt;
  auto ia = static_cast<std::size_t>(fa);
  auto jb = static_cast<std::size_t>(fb);
  auto kc = static_cast<std::size_t>(fc);
  if (ia >= res_[0] || jb >= res_[1] || kc >= res_[2]) return std::nullopt;
  return index(ia, jb, kc);
}

long long GridGeometry::q_shift(std::size_t ia, std::size_t jb) const {
  double a = lo_[0] + (ia + 0.5) * step_[0];
  double b = lo_[1] + (jb + 0.5) * step_[1];
  return static_cast<long long>(std::llround(a * b / step_[2]));
}

const LineDecomposition& GridGeometry::p_lines() const {
  if (!p_lines_) {
    auto dec = std::make_shared<LineDecomposition>();
    dec->n = num_voxels();
    double tw = step_[1] * step_[2];
    for (std::size_t jb = 0; jb < res_[1]; ++jb) {
      for (std::size_t kc = 0; kc < res_[2]; ++kc) {
        Line l;
        l.transverse_weight = tw;
        l.idx.reserve(res_[0]);
        for (std::size_t ia = 0; ia < res_[0]; ++ia)
          l.idx.push_back(index(ia, jb, kc));
        dec->lines.push_back(std::move(l));
      }
    }
    p_lines_ = dec;
  }
  return *p_lines_;
}

const LineDecomposition& GridGeometry::q_lines() const {
  if (!q_lines_) {
    auto dec = std::make_shared<LineDecomposition>();
    dec->n = num_voxels();
    double tw = step_[0] * step_[2];
    // Q-line through (ia, jb, kc) has label m = kc - q_shift(ia, jb); for a
    // fixed ia the labels partition the voxels. Lines break into maximal
    // runs of consecutive jb whose snapped c-index stays in range.
    for (std::size_t ia = 0; ia < res_[0]; ++ia) {
      std::vector<long long> shift(res_[1]);
      for (std::size_t jb = 0; jb < res_[1]; ++jb)
        shift[jb] = q_shift(ia, jb);
      long long mlo = 0, mhi = 0;
      for (std::size_t jb = 0; jb < res_[1]; ++jb) {
        mlo = std::min(mlo, 0 - shift[jb]);
        mhi = std::max(mhi, static_cast<long long>(res_[2]) - 1 - shift[jb]);
      }
      for (long long m = mlo; m <= mhi; ++m) {
        Line cur;
        cur.transverse_weight = tw;
        for (std::size_t jb = 0; jb < res_[1]; ++jb) {
          long long kc = m + shift[jb];
          if (kc >= 0 && kc < static_cast<long long>(res_[2])) {
            cur.idx.push_back(index(ia, jb, static_cast<std::size_t>(kc)));
          } else if (!cur.idx.empty()) {
            dec->lines.push_back(std::move(cur));
            cur = Line{};
            cur.transverse_weight = tw;
          }
        }
        if (!cur.idx.empty()) dec->lines.push_back(std::move(cur));
      }
    }
    q_lines_ = dec;
  }
  return *q_lines_;
}

const LineDecomposition& GridGeometry::horizontal_lines() const {
  if (!all_lines_) {
    auto dec = std::make_shared<LineDecomposition>();
    dec->n = num_voxels();
    const auto& p = p_lines();
    const auto& q = q_lines();
    dec->lines = p.lines;
    dec->lines.insert(dec->lines.end(), q.lines.begin(), q.lines.end());
    all_lines_ = dec;
  }
  return *all_lines_;
}

bool GridGeometry::same_as(const GridGeometry& o) const {
  return lo_ == o.lo_ && hi_ == o.hi_ && res_ == o.res_;
}

GridSet rasterize(const GeometryPtr& geom,
                  const std::function<bool(const GroupElement&)>& pred) {
  BitVec bits(geom->num_voxels());
  for (std::size_t v = 0; v < geom->num_voxels(); ++v)
    if (pred(geom->center(v))) bits.set(v, true);
  return {geom, std::move(bits)};
}

GridSet rasterize_halfspace(const GeometryPtr& geom, const HalfSpace& hs) {
  return rasterize(geom, [&](const GroupElement& p) { return hs.contains(p); });
}

ScalarField sample_function(
    const GeometryPtr& geom,
    const std::function<double(const GroupElement&)>& f) {
  ScalarField out;
  out.geom = geom;
  out.values.resize(geom->num_voxels());
  for (std::size_t v = 0; v < geom->num_voxels(); ++v)
    out.values[v] = f(geom->center(v));
  return out;
}

double PerimeterField::mass() const {
  double s = 0.0;
  for (double v : density) s += v;
  return s;
}

double PerimeterField::mass_on(const BitVec& region) const {
  double s = 0.0;
  for (std::size_t v = 0; v < density.size(); ++v)
    if (region.get(v)) s += density[v];
  return s;
}

PerimeterField& PerimeterField::add_scaled(const PerimeterField& other,
                                           double scale) {
  if (density.size() != other.density.size())
    throw std::invalid_argument("perimeter field: size mismatch");
  for (std::size_t v = 0; v < density.size(); ++v)
    density[v] += scale * other.density[v];
  return *this;
}

double GridCutMeasure::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

bool GridCutMeasure::atom_contains(std::size_t k, const GroupElement& p) const {
  auto v = geom->locate(p);
  if (!v)
    throw std::out_of_range("grid cut measure: point outside the grid box");
  return atoms[k].get(*v);
}

double GridCutMeasure::embed_distance(const GroupElement& u,
                                      const GroupElement& v) const {
  auto vu = geom->locate(u);
  auto vv = geom->locate(v);
  if (!vu || !vv)
    throw std::out_of_range("grid cut measure: point outside the grid box");
  double s = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k)
    if (atoms[k].get(*vu) != atoms[k].get(*vv)) s += weights[k];
  return s;
}

SlicedField slice_scalar_field(const ScalarField& field, std::size_t levels) {
  if (levels < 1)
    throw std::invalid_argument("slice_scalar_field: levels >= 1 required");
  double mn = field.values[0], mx = field.values[0];
  for (double v : field.values) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  SlicedField out;
  out.sigma.geom = field.geom;
  out.quantized.geom = field.geom;
  out.quantized.values.assign(field.values.size(), mn);
  if (mx <= mn) return out;  // constant field: empty cut measure

  double gap = (mx - mn) / static_cast<double>(levels);
  std::size_t n = field.values.size();
  for (std::size_t l = 1; l < levels; ++l) {
    double t = mn + gap * static_cast<double>(l);
    BitVec bits(n);
    for (std::size_t v = 0; v < n; ++v)
      if (field.values[v] >= t) bits.set(v, true);
    out.sigma.atoms.push_back(std::move(bits));
    out.sigma.weights.push_back(gap);
    out.sigma.thresholds.push_back(t);
  }
  // quantized field: mn + gap * (number of thresholds not exceeding the value)
  const auto& th = out.sigma.thresholds;
  for (std::size_t v = 0; v < n; ++v) {
    auto it = std::upper_bound(th.begin(), th.end(), field.values[v]);
    out.quantized.values[v] =
        mn + gap * static_cast<double>(it - th.begin());
  }
  return out;
}

double grid_variation(const ScalarField& field) {
  return line_variation(field.values, field.geom->horizontal_lines());
}

}  // namespace heiscut
