#include <cmath>
#include <stdexcept>
#include <set>
#include <vector>

#include "doctest.h"
#include "heiscut/cuts.hpp"
#include "heiscut/rng.hpp"

using namespace heiscut;

namespace {

BitVec bits_of(std::initializer_list<int> members, std::size_t n) {
  BitVec b(n);
  for (int i : members) b.set(static_cast<std::size_t>(i), true);
  return b;
}

L1Map random_integer_map(std::size_t n, std::size_t m, Rng& rng,
                         int lo = -4, int hi = 5) {
  L1Map f = L1Map::zeros(n, m);
  for (auto& v : f.values)
    v = static_cast<double>(lo + static_cast<long long>(rng.below(hi - lo)));
  for (auto& w : f.target_weights) w = 0.25 + rng.uniform();
  for (auto& w : f.domain_weights) w = 0.25 + rng.uniform();
  return f;
}

// independent pairwise L^1 oracle
std::vector<double> l1_oracle(const L1Map& f) {
  std::vector<double> d(f.n * f.n, 0.0);
  for (std::size_t i = 0; i < f.n; ++i)
    for (std::size_t j = 0; j < f.n; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < f.m; ++k)
        s += f.target_weights[k] * std::fabs(f(i, k) - f(j, k));
      d[i * f.n + j] = s;
    }
  return d;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("cut canonical form and complement") {
  std::size_t n = 10;
  Cut c = Cut::from_membership(bits_of({0, 3, 7}, n));
  CHECK(c.contains(0));
  CHECK(c.contains(3));
  CHECK(!c.contains(1));
  CHECK(c.count() == 3);
  CHECK(c.flipped());  // contains point 0, so storage is complemented
  CHECK(!c.canonical_bits().get(0));

  Cut cc = c.complemented();
  CHECK(cc.count() == 7);
  CHECK(!cc.contains(0));
  CHECK(c.metrically_equal(cc));
  CHECK(!(c == cc));

  std::vector<double> w(n, 1.0);
  CHECK(c.measure(w) == 3.0);
  CHECK(cc.measure(w) == 7.0);
}

TEST_CASE("elementary cut metric") {
  std::size_t n = 6;
  Cut c = Cut::from_membership(bits_of({1, 2}, n));
  CHECK(elementary_cut_metric(c, 1, 2) == 0);
  CHECK(elementary_cut_metric(c, 3, 4) == 0);
  CHECK(elementary_cut_metric(c, 1, 4) == 1);
  // invariant under complementation
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      CHECK(elementary_cut_metric(c, i, j) ==
            elementary_cut_metric(c.complemented(), i, j));
}

TEST_CASE("cut metric superposition") {
  std::size_t n = 7;
  CutMeasure empty;
  empty.n = n;
  auto zero = cut_metric(empty);
  for (double v : zero) CHECK(v == 0.0);

  CutMeasure single;
  single.n = n;
  single.add(Cut::from_membership(bits_of({0, 1, 2}, n)), 1.5);
  auto d = cut_metric(single);
  CHECK(d[0 * n + 1] == 0.0);
  CHECK(d[0 * n + 4] == 1.5);
  CHECK(d[3 * n + 6] == 0.0);

  // two atoms sum exactly
  Rng rng(5);
  CutMeasure a, b, both;
  a.n = b.n = both.n = n;
  for (int t = 0; t < 2; ++t) {
    BitVec bits(n);
    for (std::size_t i = 0; i < n; ++i) bits.set(i, rng.coin());
    Cut c = Cut::from_membership(bits);
    double w = 0.5 + rng.uniform();
    (t == 0 ? a : b).add(c, w);
    both.add(c, w);
  }
  auto da = cut_metric(a), db = cut_metric(b), dboth = cut_metric(both);
  for (std::size_t i = 0; i < dboth.size(); ++i)
    CHECK(dboth[i] == da[i] + db[i]);
}

TEST_CASE("cut measure dedup and validation") {
  std::size_t n = 5;
  CutMeasure sigma;
  sigma.n = n;
  Cut c = Cut::from_membership(bits_of({1, 2}, n));
  sigma.add(c, 1.0);
  sigma.add(c, 2.0);
  CHECK(sigma.atoms.size() == 1);
  CHECK(sigma.atoms[0].weight == 3.0);
  sigma.add(c.complemented(), 1.0);  // complement is a different subset
  CHECK(sigma.atoms.size() == 2);
  sigma.add(c, 0.0);  // ignored
  CHECK(sigma.atoms.size() == 2);
  CHECK_THROWS_AS(sigma.add(c, -1.0), std::invalid_argument);
}

TEST_CASE("realize_embedding reproduces the cut metric exactly") {
  std::size_t n = 8;
  Rng rng(6);
  CutMeasure sigma;
  sigma.n = n;
  for (int t = 0; t < 5; ++t) {
    BitVec bits(n);
    for (std::size_t i = 0; i < n; ++i) bits.set(i, rng.coin());
    if (bits.count() == 0 || bits.count() == n) continue;
    sigma.add(Cut::from_membership(bits), 0.25 + rng.uniform());
  }
  std::vector<double> mu(n, 1.0);
  L1Map f = realize_embedding(sigma, mu);
  CHECK(max_abs_diff(f.pairwise_l1(), cut_metric(sigma)) == 0.0);

  // single cut of weight 2
  CutMeasure one;
  one.n = 4;
  one.add(Cut::from_membership(bits_of({0}, 4)), 2.0);
  L1Map g = realize_embedding(one, std::vector<double>(4, 1.0));
  CHECK(g.m == 1);
  CHECK(g.pairwise_l1()[0 * 4 + 1] == 2.0);

  // round trip preserves the metric exactly
  CutMeasure back = cut_measure_from_map(f);
  CHECK(max_abs_diff(cut_metric(back), cut_metric(sigma)) == 0.0);
}

TEST_CASE("moving characteristic function embeds isometrically") {
  std::size_t n = 16;
  CutMeasure sigma;
  sigma.n = n;
  // prefix cuts {t >= t_i} with weight 1/n over points t_i = i/n
  for (std::size_t i = 1; i < n; ++i) {
    BitVec bits(n);
    for (std::size_t j = i; j < n; ++j) bits.set(j, true);
    sigma.add(Cut::from_membership(bits), 1.0 / double(n));
  }
  auto d = cut_metric(sigma);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      CHECK(d[i * n + j] ==
            doctest::Approx(std::fabs(double(i) - double(j)) / double(n))
                .epsilon(1e-15));
}

TEST_CASE("slice branches") {
  std::vector<double> u = {0, 1, 1, 0, 1};
  Cut a = slice(u, 0.5);
  CHECK(a.contains(1));
  CHECK(a.contains(2));
  CHECK(a.contains(4));
  CHECK(!a.contains(0));
  CHECK(slice(u, 0.0).count() == 0);

  std::vector<double> nu = {0, -1, -1, 0, -1};
  Cut b = slice(nu, -0.5);
  CHECK(b.contains(1));
  CHECK(b.contains(2));
  CHECK(b.contains(4));
  CHECK(!b.contains(0));
}

TEST_CASE("cut measure of a map: exactness and mass identity") {
  // constant map: a single full-domain cut carrying the layer-cake mass,
  // with identically zero metric
  L1Map cf = L1Map::zeros(5, 2);
  for (auto& v : cf.values) v = 3.25;
  CutMeasure csig = cut_measure_from_map(cf);
  REQUIRE(csig.atoms.size() == 1);
  CHECK(csig.atoms[0].cut.count() == 5);
  CHECK(csig.total_mass(cf.domain_weights) == doctest::Approx(cf.norm()));
  for (double v : cut_metric(csig)) CHECK(v == 0.0);

  // single indicator coordinate -> one cut of weight 1
  L1Map ind = L1Map::zeros(6, 1);
  ind.at(1, 0) = 1.0;
  ind.at(4, 0) = 1.0;
  CutMeasure si = cut_measure_from_map(ind);
  REQUIRE(si.atoms.size() == 1);
  CHECK(si.atoms[0].weight == 1.0);
  CHECK(si.atoms[0].cut.contains(1));
  CHECK(si.atoms[0].cut.contains(4));
  CHECK(si.atoms[0].cut.count() == 2);

  // random integer maps: metric and mass identities are exact
  Rng rng(77);
  for (int t = 0; t < 40; ++t) {
    L1Map f = random_integer_map(6, 3, rng);
    CutMeasure sigma = cut_measure_from_map(f);
    CHECK(max_abs_diff(cut_metric(sigma), l1_oracle(f)) <= 1e-12);
    CHECK(sigma.total_mass(f.domain_weights) ==
          doctest::Approx(f.norm()).epsilon(1e-13));
  }

  // two-valued column produces a set and its complement, both carrying mass
  L1Map pm = L1Map::zeros(4, 1);
  pm.values = {1, -1, 1, -1};
  CutMeasure spm = cut_measure_from_map(pm);
  CHECK(spm.atoms.size() == 2);
  CHECK(spm.total_mass(pm.domain_weights) == doctest::Approx(4.0));
}

TEST_CASE("dual map is a norm-preserving involution") {
  Rng rng(78);
  L1Map f = random_integer_map(7, 4, rng);
  L1Map g = dual_map(f);
  CHECK(g.n == f.m);
  CHECK(g.m == f.n);
  CHECK(g.norm() == doctest::Approx(f.norm()).epsilon(1e-14));
  L1Map ff = dual_map(g);
  CHECK(ff.values == f.values);
  CHECK(ff.target_weights == f.target_weights);
  CHECK(ff.domain_weights == f.domain_weights);

  L1Map tiny = L1Map::zeros(1, 1);
  tiny.at(0, 0) = 2.5;
  L1Map dt = dual_map(tiny);
  CHECK(dt.values == tiny.values);
}

TEST_CASE("line variation") {
  auto dec = LineDecomposition::single_line(9);
  std::vector<double> constant(9, 4.0);
  CHECK(line_variation(constant, dec) == 0.0);

  std::vector<double> bump(9, 0.0);
  for (int i = 3; i <= 5; ++i) bump[i] = 1.0;
  CHECK(line_variation(bump, dec) == 2.0);

  std::vector<double> edge(9, 0.0);
  for (int i = 0; i <= 2; ++i) edge[i] = 1.0;
  CHECK(line_variation(edge, dec) == 1.0);

  std::vector<double> mono = {0, 0.5, 0.7, 1.1, 2.0, 2.0, 3.5, 4.0, 6.0};
  CHECK(line_variation(mono, dec) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("discrete coarea identity") {
  auto dec = LineDecomposition::single_line(12);
  Rng rng(79);

  std::vector<double> ind(12, 0.0);
  for (int i = 4; i <= 7; ++i) ind[i] = 1.0;
  auto [l0, r0] = coarea_check(ind, dec);
  CHECK(l0 == r0);
  CHECK(l0 == 2.0);

  for (int t = 0; t < 50; ++t) {
    std::vector<double> h(12);
    for (auto& v : h) v = double(rng.below(7)) - 3.0;
    auto [lhs, rhs] = coarea_check(h, dec);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));

    std::vector<double> shifted = h;
    for (auto& v : shifted) v += 17.5;
    auto [ls, rs] = coarea_check(shifted, dec);
    CHECK(ls == doctest::Approx(lhs).epsilon(1e-14));
    CHECK(rs == doctest::Approx(rhs).epsilon(1e-14));
  }
}

TEST_CASE("total perimeter equals total variation") {
  auto dec = LineDecomposition::single_line(10);

  // indicator: both sides are the jump count
  L1Map ind = L1Map::zeros(10, 1);
  for (int i = 2; i <= 6; ++i) ind.at(i, 0) = 1.0;
  auto [p0, v0] = total_variation_identity(ind, dec);
  CHECK(p0 == v0);
  CHECK(p0 == 2.0);

  Rng rng(80);
  for (int t = 0; t < 30; ++t) {
    L1Map f = random_integer_map(10, 3, rng);
    auto [per, var] = total_variation_identity(f, dec);
    CHECK(per == doctest::Approx(var).epsilon(1e-13));
  }

  L1Map cf = L1Map::zeros(10, 2);
  auto [pc, vc] = total_variation_identity(cf, dec);
  CHECK(pc == 0.0);
  CHECK(vc == 0.0);
}

TEST_CASE("cut metrics are pseudometrics and complement invariant") {
  Rng rng(81);
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 3 + rng.below(8);
    CutMeasure sigma;
    sigma.n = n;
    std::size_t atoms = 1 + rng.below(6);
    for (std::size_t k = 0; k < atoms; ++k) {
      BitVec bits(n);
      for (std::size_t i = 0; i < n; ++i) bits.set(i, rng.coin());
      if (bits.count() == 0 || bits.count() == n) continue;
      sigma.add(Cut::from_membership(bits), 0.1 + rng.uniform());
    }
    auto d = cut_metric(sigma);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(d[i * n + i] == 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(d[i * n + j] >= 0.0);
        CHECK(d[i * n + j] == d[j * n + i]);
        for (std::size_t k = 0; k < n; ++k)
          CHECK(d[i * n + j] <= d[i * n + k] + d[k * n + j] + 1e-12);
      }
    }
    if (!sigma.atoms.empty()) {
      CutMeasure flipped;
      flipped.n = n;
      for (std::size_t k = 0; k < sigma.atoms.size(); ++k) {
        Cut c = k == 0 ? sigma.atoms[k].cut.complemented() : sigma.atoms[k].cut;
        flipped.add(c, sigma.atoms[k].weight);
      }
      // merged weights may re-associate additions
      CHECK(max_abs_diff(cut_metric(flipped), d) <= 1e-12);
    }
  }
}
