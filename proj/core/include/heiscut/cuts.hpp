#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "heiscut/bitvec.hpp"

namespace heiscut {

// A cut: subset of an indexed point set, stored in canonical form. The
// canonical bit vector never contains point 0; the flip flag recovers the
// actual membership, so complementary cuts share storage and compare equal
// metrically while the set itself stays recoverable.
class Cut {
 public:
  Cut() = default;
  static Cut from_membership(const BitVec& membership);

  std::size_t size() const { return bits_.size(); }
  bool contains(std::size_t i) const { return bits_.get(i) != flipped_; }
  std::size_t count() const {
    return flipped_ ? bits_.size() - bits_.count() : bits_.count();
  }
  BitVec membership() const {
    return flipped_ ? bits_.complement() : bits_;
  }
  const BitVec& canonical_bits() const { return bits_; }
  bool flipped() const { return flipped_; }

  Cut complemented() const {
    Cut c = *this;
    c.flipped_ = !c.flipped_;
    return c;
  }

  double measure(std::span<const double> weights) const;

  // identical subsets (not merely metrically equivalent)
  bool operator==(const Cut& o) const {
    return flipped_ == o.flipped_ && bits_ == o.bits_;
  }
  bool operator<(const Cut& o) const {
    if (bits_ != o.bits_) return bits_ < o.bits_;
    return flipped_ < o.flipped_;
  }
  bool metrically_equal(const Cut& o) const { return bits_ == o.bits_; }

 private:
  BitVec bits_;
  bool flipped_ = false;
};

struct CutMeasureAtom {
  Cut cut;
  double weight = 0.0;
};

// Finite atomic cut measure. Atoms are deduplicated (identical subsets merge
// their weights) and zero-weight atoms are dropped.
struct CutMeasure {
  std::size_t n = 0;
  std::vector<CutMeasureAtom> atoms;

  void add(const Cut& cut, double weight);
  double total_weight() const;
  // sum of w_k * mu(E_k)
  double total_mass(std::span<const double> weights) const;
  void sort_atoms();
};

// Finite map into a weighted L^1 target: n domain points × m coordinates.
struct L1Map {
  std::size_t n = 0, m = 0;
  std::vector<double> values;          // n×m row-major
  std::vector<double> target_weights;  // nu_j > 0
  std::vector<double> domain_weights;  // mu_i > 0

  double operator()(std::size_t i, std::size_t j) const {
    return values[i * m + j];
  }
  double& at(std::size_t i, std::size_t j) { return values[i * m + j]; }

  static L1Map zeros(std::size_t n, std::size_t m);

  double norm() const;  // sum_i mu_i sum_j nu_j |values[i][j]|
  // d_f(i,j) = sum_j nu_j |f(i,j) - f(k,j)|, n×n row-major
  std::vector<double> pairwise_l1() const;
};

// |chi_E(i) - chi_E(j)|
int elementary_cut_metric(const Cut& cut, std::size_t i, std::size_t j);

// d_Sigma(i,j) = sum_k w_k d_{E_k}(i,j), n×n row-major
std::vector<double> cut_metric(const CutMeasure& sigma);

// The tautological embedding: one target coordinate per atom with weight w_k
// and values chi_{E_k}(i); its pairwise L^1 matrix equals cut_metric(sigma).
L1Map realize_embedding(const CutMeasure& sigma,
                        std::span<const double> domain_weights);

// {u >= t} for t > 0, the empty set for t = 0, {u <= t} for t < 0.
Cut slice(std::span<const double> u, double t);

// Finite realization of the cut measure of f: slice each coordinate over the
// maximal threshold intervals on which the slice is constant and nonempty.
// cut_metric of the result reproduces pairwise_l1(f) exactly, and the total
// mass equals ||f||.
CutMeasure cut_measure_from_map(const L1Map& f);

// Transpose the values and swap the weight roles; an involution preserving
// the norm.
L1Map dual_map(const L1Map& f);

// Ordered lines over a point set, each with a transverse cross-section
// weight. Variation is accumulated along consecutive indices of each line.
struct Line {
  std::vector<std::size_t> idx;
  double transverse_weight = 1.0;
};

struct LineDecomposition {
  std::size_t n = 0;
  std::vector<Line> lines;

  static LineDecomposition single_line(std::size_t n, double weight = 1.0);
};

// VAR(h) = sum over lines of transverse weight × sum of |h(s+1) - h(s)|.
double line_variation(std::span<const double> h, const LineDecomposition& dec);

// Discrete coarea identity. Returns (lhs, rhs) with lhs = line_variation(h)
// and rhs the threshold-gap-weighted variation of the superlevel indicator
// functions; the two agree exactly up to floating point.
std::pair<double, double> coarea_check(std::span<const double> h,
                                       const LineDecomposition& dec,
                                       std::span<const double> thresholds);
std::pair<double, double> coarea_check(std::span<const double> h,
                                       const LineDecomposition& dec);

// (total perimeter of the sliced cut measure, total variation of f): equal
// up to floating point for any line-structured f.
std::pair<double, double> total_variation_identity(const L1Map& f,
                                                   const LineDecomposition& dec);

}  // namespace heiscut
