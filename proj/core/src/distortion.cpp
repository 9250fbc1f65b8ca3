#include "heiscut/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "heiscut/heisenberg.hpp"
#include "heiscut/rng.hpp"
#include "heiscut/simplex.hpp"

#include <cstdio>
#include <cstdlib>

namespace heiscut {

const char* to_string(CertStatus s) {
  switch (s) {
    case CertStatus::ExactCertified:
      return "ExactCertified";
    case CertStatus::HeuristicUpperEmbedding:
      return "HeuristicUpperEmbedding";
    case CertStatus::HeuristicLowerBound:
      return "HeuristicLowerBound";
  }
  return "unknown";
}

std::vector<Cut> enumerate_cuts(std::size_t n, std::size_t cap) {
  if (n < 2) throw std::invalid_argument("enumerate_cuts: n >= 2 required");
  if (n > cap)
    throw std::invalid_argument("enumerate_cuts: n above enumeration cap");
  // canonical representatives: nonempty subsets of {1,..,n-1} (point 0 out)
  std::vector<Cut> cuts;
  std::uint64_t count = (1ULL << (n - 1)) - 1;
  cuts.reserve(count);
  for (std::uint64_t mask = 1; mask <= count; ++mask) {
    BitVec bits(n);
    for (std::size_t i = 0; i + 1 < n; ++i)
      if ((mask >> i) & 1ULL) bits.set(i + 1, true);
    cuts.push_back(Cut::from_membership(bits));
  }
  return cuts;
}

namespace {

struct PairList {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> d;
};

PairList all_pairs(const FiniteMetricSpace& s) {
  PairList pl;
  std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      pl.pairs.push_back({i, j});
      pl.d.push_back(s.d(i, j));
    }
  return pl;
}

struct MasterSolution {
  std::vector<double> w;
  double s = 0.0;
  std::vector<double> y, z;  // duals per active pair: non-expansive / co-Lipschitz
  LpResult::Status status = LpResult::Status::Optimal;
  long pivots = 0;
};

struct MasterWarm {
  std::vector<std::size_t> basis;  // in final-solve numbering
  std::size_t ncols = 0;           // structural count it was built for
  std::size_t nrows = 0;
  bool valid = false;
};

MasterSolution solve_master(const PairList& pl,
                            const std::vector<std::size_t>& active,
                            const std::vector<Cut>& cuts, long max_pivots,
                            double tol, MasterWarm* warm = nullptr) {
  std::size_t np = active.size();
  std::size_t nc = cuts.size();
  std::size_t rows = 2 * np;
  std::size_t cols = nc + 1;  // cut weights + s
  std::vector<double> A(rows * cols, 0.0), b(rows, 0.0), c(cols, 0.0);
  c[nc] = 1.0;
  for (std::size_t p = 0; p < np; ++p) {
    auto [i, j] = pl.pairs[active[p]];
    double dij = pl.d[active[p]];
    for (std::size_t k = 0; k < nc; ++k) {
      if (elementary_cut_metric(cuts[k], i, j)) {
        A[p * cols + k] = 1.0;
        A[(np + p) * cols + k] = -1.0;
      }
    }
    A[(np + p) * cols + nc] = dij;
    b[p] = dij;
  }
  std::vector<std::size_t> remapped;
  const std::vector<std::size_t>* warm_ptr = nullptr;
  if (warm && warm->valid && warm->nrows == rows && warm->ncols <= cols) {
    // columns were appended: old cut indices keep their slots, s and the
    // slacks shift to the end of the new structural block
    remapped.reserve(warm->basis.size());
    std::size_t old_cols = warm->ncols;
    for (std::size_t v : warm->basis) {
      if (v + 1 == old_cols) {
        remapped.push_back(cols - 1);  // the s column
      } else if (v < old_cols) {
        remapped.push_back(v);
      } else {
        remapped.push_back(v - old_cols + cols);  // slack
      }
    }
    warm_ptr = &remapped;
  }
  LpResult lp = simplex_solve(rows, cols, A, b, c, max_pivots, tol, warm_ptr);
  MasterSolution ms;
  ms.status = lp.status;
  ms.pivots = lp.pivots;
  ms.s = lp.x[nc];
  ms.w.assign(lp.x.begin(), lp.x.begin() + nc);
  ms.y.assign(lp.duals.begin(), lp.duals.begin() + np);
  ms.z.assign(lp.duals.begin() + np, lp.duals.end());
  if (warm) {
    warm->basis = std::move(lp.basis);
    warm->ncols = cols;
    warm->nrows = rows;
    warm->valid = lp.status == LpResult::Status::Optimal;
  }
  return ms;
}

CutMeasure witness_from(const std::vector<Cut>& cuts,
                        const std::vector<double>& w, std::size_t n,
                        double tol) {
  CutMeasure sigma;
  sigma.n = n;
  for (std::size_t k = 0; k < cuts.size(); ++k)
    if (w[k] > tol) sigma.add(cuts[k], w[k]);
  sigma.sort_atoms();
  return sigma;
}

// d_Sigma evaluated from explicit cut/weight arrays (avoids the dedup pass)
std::vector<double> metric_of(const std::vector<Cut>& cuts,
                              const std::vector<double>& w, std::size_t n) {
  std::vector<double> d(n * n, 0.0);
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    if (w[k] <= 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      bool ci = cuts[k].contains(i);
      for (std::size_t j = i + 1; j < n; ++j)
        if (ci != cuts[k].contains(j)) {
          d[i * n + j] += w[k];
          d[j * n + i] += w[k];
        }
    }
  }
  return d;
}

}  // namespace

DistortionResult min_distortion_exact(const FiniteMetricSpace& space,
                                      std::size_t enum_cap) {
  space.validate();
  std::size_t n = space.size();
  std::vector<Cut> cuts = enumerate_cuts(n, enum_cap);
  PairList pl = all_pairs(space);
  std::vector<std::size_t> active(pl.pairs.size());
  for (std::size_t p = 0; p < active.size(); ++p) active[p] = p;

  MasterSolution ms = solve_master(pl, active, cuts, 16'000'000, 1e-9);
  if (ms.status != LpResult::Status::Optimal)
    throw NumericalError("min_distortion_exact: simplex did not converge");

  DistortionResult res;
  res.s_value = ms.s;
  res.distortion =
      ms.s > 0.0 ? 1.0 / ms.s : std::numeric_limits<double>::infinity();
  res.witness = witness_from(cuts, ms.w, n, 1e-12);
  res.status = CertStatus::ExactCertified;
  res.lp_stats.pivots = ms.pivots;
  res.lp_stats.master_solves = 1;
  res.lp_stats.columns_added = static_cast<int>(cuts.size());
  res.lp_stats.rows_active = static_cast<int>(2 * active.size());
  return res;
}

namespace {

// Seed family: singletons, metric balls around every point at every
// occurring radius, and coordinate half-spaces when the points carry
// coordinates.
std::vector<Cut> seed_cuts(const FiniteMetricSpace& s) {
  std::size_t n = s.size();
  std::set<Cut> out;
  for (std::size_t i = 0; i < n; ++i) {
    BitVec b(n);
    b.set(i, true);
    out.insert(Cut::from_membership(b));
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> byd;
    for (std::size_t j = 0; j < n; ++j) byd.push_back({s.d(i, j), j});
    std::sort(byd.begin(), byd.end());
    BitVec ball(n);
    for (std::size_t k = 0; k < n; ++k) {
      ball.set(byd[k].second, true);
      bool last_of_radius = (k + 1 == n) || (byd[k + 1].first > byd[k].first);
      if (last_of_radius && k + 1 < n)
        out.insert(Cut::from_membership(ball));
    }
  }
  if (!s.coords.empty()) {
    // half-space cuts along the axes, along diagonal directions of the
    // horizontal projection, and along the center coordinate
    std::vector<std::array<double, 3>> dirs = {
        {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0},  {1, -1, 0},
        {2, 1, 0}, {1, 2, 0}, {2, -1, 0}, {1, -2, 0}};
    for (const auto& dir : dirs) {
      std::vector<double> vals;
      for (const auto& c : s.coords)
        vals.push_back(dir[0] * c[0] + dir[1] * c[1] + dir[2] * c[2]);
      std::vector<double> sorted = vals;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      for (std::size_t t = 1; t < sorted.size(); ++t) {
        BitVec b(n);
        for (std::size_t i = 0; i < n; ++i)
          if (vals[i] >= sorted[t]) b.set(i, true);
        out.insert(Cut::from_membership(b));
      }
    }
  }
  return {out.begin(), out.end()};
}

// Bit-flip hill climbing on V(E) = sum over pairs of q_p * delta_E(p).
// Returns the best local optima found across restarts, most violated first.
std::vector<std::pair<double, Cut>> separate_heuristic(
    std::size_t n, const std::vector<double>& q /* n×n symmetric */,
    int restarts, Rng& rng, double tol) {
  std::vector<std::pair<double, Cut>> found;
  std::vector<char> in(n);
  std::vector<double> gain(n);
  for (int r = 0; r < restarts; ++r) {
    for (std::size_t i = 0; i < n; ++i) in[i] = rng.coin() ? 1 : 0;
    // gain_i = change in V from flipping i, maintained incrementally
    for (std::size_t i = 0; i < n; ++i) {
      double g = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double qij = q[i * n + j];
        g += (in[i] != in[j]) ? -qij : qij;
      }
      gain[i] = g;
    }
    for (int step = 0; step < 4 * static_cast<int>(n); ++step) {
      double best = tol;
      std::size_t besti = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (gain[i] > best) {
          best = gain[i];
          besti = i;
        }
      }
      if (besti == n) break;
      in[besti] ^= 1;
      gain[besti] = -gain[besti];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == besti) continue;
        double qij = q[besti * n + j];
        gain[j] += (in[j] == in[besti]) ? 2.0 * qij : -2.0 * qij;
      }
    }
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (in[i] != in[j]) v += q[i * n + j];
    if (v > tol) {
      BitVec bits(n);
      std::size_t members = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (in[i]) {
          bits.set(i, true);
          ++members;
        }
      if (members > 0 && members < n)
        found.push_back({v, Cut::from_membership(bits)});
    }
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  return found;
}

std::pair<double, Cut> separate_exhaustive(std::size_t n,
                                           const std::vector<double>& q) {
  double best = 0.0;
  std::uint64_t bestmask = 0;
  std::uint64_t count = (1ULL << (n - 1)) - 1;
  for (std::uint64_t mask = 1; mask <= count; ++mask) {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      bool ini = i > 0 && ((mask >> (i - 1)) & 1ULL);
      for (std::size_t j = i + 1; j < n; ++j) {
        bool inj = (mask >> (j - 1)) & 1ULL;
        if (ini != inj) v += q[i * n + j];
      }
    }
    if (v > best) {
      best = v;
      bestmask = mask;
    }
  }
  BitVec bits(n);
  for (std::size_t i = 1; i < n; ++i)
    if ((bestmask >> (i - 1)) & 1ULL) bits.set(i, true);
  return {best, Cut::from_membership(bits)};
}

}  // namespace

DistortionResult min_distortion_colgen(const FiniteMetricSpace& space,
                                       const ColgenOptions& opts) {
  space.validate();
  std::size_t n = space.size();
  PairList pl = all_pairs(space);
  std::size_t npairs = pl.pairs.size();
  Rng rng(opts.seed);

  std::vector<Cut> cuts = seed_cuts(space);
  std::set<Cut> have(cuts.begin(), cuts.end());

  // Lazy pair activation keeps the dense masters small: start from the
  // nearest-neighbor pairs plus a deterministic sample, then pull in
  // violated pairs until the witness is feasible on every pair.
  std::vector<std::size_t> active;
  std::vector<char> is_active(npairs, 0);
  auto activate = [&](std::size_t p) {
    if (!is_active[p]) {
      is_active[p] = 1;
      active.push_back(p);
    }
  };
  if (2 * npairs <= std::min<std::size_t>(opts.max_active_rows, 420)) {
    for (std::size_t p = 0; p < npairs; ++p) activate(p);
  } else {
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t p = 0; p < npairs; ++p) {
      auto [i, j] = pl.pairs[p];
      nearest[i] = std::min(nearest[i], pl.d[p]);
      nearest[j] = std::min(nearest[j], pl.d[p]);
    }
    for (std::size_t p = 0; p < npairs; ++p) {
      auto [i, j] = pl.pairs[p];
      if (pl.d[p] <= nearest[i] || pl.d[p] <= nearest[j]) activate(p);
    }
    std::size_t want = std::min<std::size_t>(4 * n, npairs);
    while (active.size() < want) activate(rng.below(npairs));
  }

  DistortionResult res;
  res.status = CertStatus::HeuristicUpperEmbedding;
  MasterSolution ms;
  MasterWarm warm;
  std::vector<int> slack_streak(npairs, 0);

  auto dual_q = [&](const MasterSolution& m) {
    std::vector<double> q(n * n, 0.0);
    for (std::size_t p = 0; p < active.size(); ++p) {
      auto [i, j] = pl.pairs[active[p]];
      double v = m.z[p] - m.y[p];
      q[i * n + j] += v;
      q[j * n + i] += v;
    }
    return q;
  };

  bool certified = false;
  for (int round = 0; round < opts.budget; ++round) {
    // inner row-generation loop: solve the master to optimality over the
    // full pair set with the current cut family
    for (;;) {
      ms = solve_master(pl, active, cuts, opts.max_pivots, opts.tol, &warm);
      ++res.lp_stats.master_solves;
      res.lp_stats.pivots += ms.pivots;
      if (std::getenv("HEISCUT_TRACE"))
        std::fprintf(stderr, "master: rows=%zu cols=%zu pivots=%ld s=%.9f\n",
                     2 * active.size(), cuts.size() + 1, ms.pivots, ms.s);
      if (ms.status != LpResult::Status::Optimal)
        throw NumericalError("min_distortion_colgen: master LP failed");

      std::vector<double> dsig = metric_of(cuts, ms.w, n);
      // collect violated inactive pairs
      std::vector<std::pair<double, std::size_t>> viol;
      for (std::size_t p = 0; p < npairs; ++p) {
        if (is_active[p]) continue;
        auto [i, j] = pl.pairs[p];
        double v1 = dsig[i * n + j] - pl.d[p];             // > 0: expansion
        double v2 = ms.s * pl.d[p] - dsig[i * n + j];      // > 0: below s·d
        double v = std::max(v1, v2);
        if (v > opts.tol) viol.push_back({v, p});
      }
      if (viol.empty()) {
        // retire pairs whose rows stayed slack for several solves; they are
        // re-activated by this same check if they ever bind again
        std::vector<std::size_t> keep;
        for (std::size_t p = 0; p < active.size(); ++p) {
          std::size_t idx = active[p];
          auto [i, j] = pl.pairs[idx];
          double slack_a = pl.d[idx] - dsig[i * n + j];
          double slack_b = dsig[i * n + j] - ms.s * pl.d[idx];
          if (slack_a > 1e-7 && slack_b > 1e-7)
            ++slack_streak[idx];
          else
            slack_streak[idx] = 0;
          if (slack_streak[idx] >= 3 && active.size() - keep.size() > 2 * n &&
              keep.size() + (active.size() - p) > 2 * n) {
            is_active[idx] = 0;
            warm.valid = false;
          } else {
            keep.push_back(idx);
          }
        }
        if (keep.size() != active.size()) active = std::move(keep);
        break;
      }
      std::sort(viol.begin(), viol.end(),
                [](const auto& a, const auto& b) { return a.first > b.first; });
      std::size_t add = std::min<std::size_t>(viol.size(), 96);
      for (std::size_t t = 0; t < add; ++t) activate(viol[t].second);
      warm.valid = false;
    }

    // column separation on the duals
    std::vector<double> q = dual_q(ms);
    auto cands = separate_heuristic(n, q, opts.restarts, rng, opts.tol);
    int added = 0;
    for (const auto& [v, cut] : cands) {
      if (added >= 24) break;
      if (have.insert(cut).second) {
        cuts.push_back(cut);
        ++added;
      }
    }
    if (added == 0 && n <= opts.exhaustive_cap) {
      auto [v, cut] = separate_exhaustive(n, q);
      if (v > opts.tol && have.insert(cut).second) {
        cuts.push_back(cut);
        ++added;
      } else if (v <= opts.tol) {
        certified = true;
      }
    }
    res.lp_stats.columns_added += added;
    if (added == 0) break;
    if (round + 1 == opts.budget) res.lp_stats.budget_exhausted = true;
  }

  res.s_value = ms.s;
  res.distortion =
      ms.s > 0.0 ? 1.0 / ms.s : std::numeric_limits<double>::infinity();
  res.witness = witness_from(cuts, ms.w, n, 1e-12);
  res.lp_stats.rows_active = static_cast<int>(2 * active.size());
  res.lp_stats.separation_exhausted = certified;
  res.status = certified ? CertStatus::ExactCertified
                         : CertStatus::HeuristicUpperEmbedding;
  return res;
}

WitnessReport verify_witness(const FiniteMetricSpace& space,
                             const DistortionResult& result) {
  WitnessReport rep;
  std::size_t n = space.size();
  std::vector<double> dsig = cut_metric(result.witness);
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = space.d(i, j);
      double v = dsig[i * n + j];
      rep.max_nonexpansive_violation =
          std::max(rep.max_nonexpansive_violation, v - d);
      rep.max_colipschitz_violation =
          std::max(rep.max_colipschitz_violation, result.s_value * d - v);
      rep.min_ratio = std::min(rep.min_ratio, v / d);
    }
  }
  if (n < 2) rep.min_ratio = 1.0;
  rep.infinite = !(rep.min_ratio > 0.0);
  rep.achieved_distortion =
      rep.infinite ? std::numeric_limits<double>::infinity()
                   : 1.0 / rep.min_ratio;
  return rep;
}

}  // namespace heiscut
