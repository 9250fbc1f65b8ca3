#include "heiscut/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace heiscut {

Cut Cut::from_membership(const BitVec& membership) {
  Cut c;
  c.flipped_ = membership.size() > 0 && membership.get(0);
  c.bits_ = c.flipped_ ? membership.complement() : membership;
  return c;
}

double Cut::measure(std::span<const double> weights) const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    if (contains(i)) m += weights[i];
  return m;
}

void CutMeasure::add(const Cut& cut, double weight) {
  if (cut.size() != n) throw std::invalid_argument("cut measure: size mismatch");
  if (weight == 0.0) return;
  if (!(weight > 0.0))
    throw std::invalid_argument("cut measure: weights must be positive");
  for (auto& a : atoms) {
    if (a.cut == cut) {
      a.weight += weight;
      return;
    }
  }
  atoms.push_back({cut, weight});
}

double CutMeasure::total_weight() const {
  double w = 0.0;
  for (const auto& a : atoms) w += a.weight;
  return w;
}

double CutMeasure::total_mass(std::span<const double> weights) const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.weight * a.cut.measure(weights);
  return m;
}

void CutMeasure::sort_atoms() {
  std::sort(atoms.begin(), atoms.end(),
            [](const CutMeasureAtom& x, const CutMeasureAtom& y) {
              return x.cut < y.cut;
            });
}

L1Map L1Map::zeros(std::size_t n, std::size_t m) {
  L1Map f;
  f.n = n;
  f.m = m;
  f.values.assign(n * m, 0.0);
  f.target_weights.assign(m, 1.0);
  f.domain_weights.assign(n, 1.0);
  return f;
}

double L1Map::norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      row += target_weights[j] * std::fabs(values[i * m + j]);
    s += domain_weights[i] * row;
  }
  return s;
}

std::vector<double> L1Map::pairwise_l1() const {
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        s += target_weights[j] * std::fabs(values[i * m + j] - values[k * m + j]);
      d[i * n + k] = d[k * n + i] = s;
    }
  }
  return d;
}

int elementary_cut_metric(const Cut& cut, std::size_t i, std::size_t j) {
  return cut.contains(i) != cut.contains(j) ? 1 : 0;
}

std::vector<double> cut_metric(const CutMeasure& sigma) {
  std::size_t n = sigma.n;
  std::vector<double> d(n * n, 0.0);
  for (const auto& atom : sigma.atoms) {
    for (std::size_t i = 0; i < n; ++i) {
      bool ci = atom.cut.contains(i);
      for (std::size_t j = i + 1; j < n; ++j) {
        if (ci != atom.cut.contains(j)) {
          d[i * n + j] += atom.weight;
          d[j * n + i] += atom.weight;
        }
      }
    }
  }
  return d;
}

L1Map realize_embedding(const CutMeasure& sigma,
                        std::span<const double> domain_weights) {
  if (domain_weights.size() != sigma.n)
    throw std::invalid_argument("realize_embedding: weight size mismatch");
  L1Map f = L1Map::zeros(sigma.n, sigma.atoms.size());
  f.domain_weights.assign(domain_weights.begin(), domain_weights.end());
  for (std::size_t k = 0; k < sigma.atoms.size(); ++k) {
    f.target_weights[k] = sigma.atoms[k].weight;
    for (std::size_t i = 0; i < sigma.n; ++i)
      f.at(i, k) = sigma.atoms[k].cut.contains(i) ? 1.0 : 0.0;
  }
  return f;
}

Cut slice(std::span<const double> u, double t) {
  BitVec bits(u.size());
  if (t > 0.0) {
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] >= t) bits.set(i, true);
  } else if (t < 0.0) {
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] <= t) bits.set(i, true);
  }
  return Cut::from_membership(bits);
}

CutMeasure cut_measure_from_map(const L1Map& f) {
  CutMeasure sigma;
  sigma.n = f.n;
  for (std::size_t j = 0; j < f.m; ++j) {
    double nu = f.target_weights[j];
    std::vector<double> col(f.n);
    for (std::size_t i = 0; i < f.n; ++i) col[i] = f(i, j);

    std::set<double> distinct(col.begin(), col.end());

    // positive thresholds: {u >= t} is constant on (p_{k-1}, p_k]
    double prev = 0.0;
    for (double v : distinct) {
      if (v <= 0.0) continue;
      Cut c = slice(col, v);
      if (c.count() > 0) sigma.add(c, nu * (v - prev));
      prev = v;
    }
    // negative thresholds: {u <= t} is constant on [n_k, n_{k+1})
    prev = 0.0;
    for (auto it = distinct.rbegin(); it != distinct.rend(); ++it) {
      double v = *it;
      if (v >= 0.0) continue;
      Cut c = slice(col, v);
      if (c.count() > 0) sigma.add(c, nu * (prev - v));
      prev = v;
    }
  }
  return sigma;
}

L1Map dual_map(const L1Map& f) {
  L1Map g = L1Map::zeros(f.m, f.n);
  g.target_weights = f.domain_weights;
  g.domain_weights = f.target_weights;
  for (std::size_t i = 0; i < f.n; ++i)
    for (std::size_t j = 0; j < f.m; ++j) g.at(j, i) = f(i, j);
  return g;
}

LineDecomposition LineDecomposition::single_line(std::size_t n, double weight) {
  LineDecomposition dec;
  dec.n = n;
  Line l;
  l.idx.resize(n);
  for (std::size_t i = 0; i < n; ++i) l.idx[i] = i;
  l.transverse_weight = weight;
  dec.lines.push_back(std::move(l));
  return dec;
}

double line_variation(std::span<const double> h, const LineDecomposition& dec) {
  double var = 0.0;
  for (const auto& line : dec.lines) {
    double v = 0.0;
    for (std::size_t s = 0; s + 1 < line.idx.size(); ++s)
      v += std::fabs(h[line.idx[s + 1]] - h[line.idx[s]]);
    var += line.transverse_weight * v;
  }
  return var;
}

std::pair<double, double> coarea_check(std::span<const double> h,
                                       const LineDecomposition& dec,
                                       std::span<const double> thresholds) {
  double lhs = line_variation(h, dec);
  double rhs = 0.0;
  std::vector<double> indicator(h.size());
  for (std::size_t k = 1; k < thresholds.size(); ++k) {
    double gap = thresholds[k] - thresholds[k - 1];
    double t = thresholds[k];
    for (std::size_t i = 0; i < h.size(); ++i)
      indicator[i] = h[i] >= t ? 1.0 : 0.0;
    rhs += gap * line_variation(indicator, dec);
  }
  return {lhs, rhs};
}

std::pair<double, double> coarea_check(std::span<const double> h,
                                       const LineDecomposition& dec) {
  std::set<double> distinct(h.begin(), h.end());
  std::vector<double> thresholds(distinct.begin(), distinct.end());
  return coarea_check(h, dec, thresholds);
}

std::pair<double, double> total_variation_identity(
    const L1Map& f, const LineDecomposition& dec) {
  CutMeasure sigma = cut_measure_from_map(f);
  std::vector<double> indicator(f.n);
  double total_perimeter = 0.0;
  for (const auto& atom : sigma.atoms) {
    for (std::size_t i = 0; i < f.n; ++i)
      indicator[i] = atom.cut.contains(i) ? 1.0 : 0.0;
    total_perimeter += atom.weight * line_variation(indicator, dec);
  }
  double total_variation = 0.0;
  std::vector<double> col(f.n);
  for (std::size_t j = 0; j < f.m; ++j) {
    for (std::size_t i = 0; i < f.n; ++i) col[i] = f(i, j);
    total_variation += f.target_weights[j] * line_variation(col, dec);
  }
  return {total_perimeter, total_variation};
}

}  // namespace heiscut
