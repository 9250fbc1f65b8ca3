#pragma once

#include <cstdint>
#include <vector>

#include "heiscut/cuts.hpp"
#include "heiscut/metric_space.hpp"

namespace heiscut {

enum class CertStatus {
  ExactCertified,           // optimal over the full cut cone
  HeuristicUpperEmbedding,  // witness embedding gives an upper bound on the
                            // optimal distortion
  HeuristicLowerBound,      // reserved: value derived from dual information
                            // only, no realizing embedding
};

const char* to_string(CertStatus s);

struct LpStats {
  long pivots = 0;
  int master_solves = 0;
  int columns_added = 0;
  int rows_active = 0;
  bool budget_exhausted = false;
  bool separation_exhausted = false;
};

struct DistortionResult {
  double distortion = 1.0;  // 1/s*
  double s_value = 1.0;     // optimal lower bi-Lipschitz bound of the witness
  CutMeasure witness;
  CertStatus status = CertStatus::HeuristicUpperEmbedding;
  LpStats lp_stats;
};

// All 2^{n-1} - 1 nontrivial cuts up to complementation, in canonical
// ascending order. n above the cap is rejected.
std::vector<Cut> enumerate_cuts(std::size_t n, std::size_t cap = 16);

// Optimal L^1 distortion via the full cut-cone LP: maximize s subject to
// d_Sigma(i,j) <= d(i,j) and d_Sigma(i,j) >= s·d(i,j) over all pairs;
// distortion = 1/s*. Deterministic (Bland pivoting, fixed cut order).
DistortionResult min_distortion_exact(const FiniteMetricSpace& space,
                                      std::size_t enum_cap = 16);

struct ColgenOptions {
  long budget = 200;            // master solve cap
  std::uint64_t seed = 1;       // separation restarts
  int restarts = 48;            // hill-climb restarts per separation round
  std::size_t exhaustive_cap = 20;  // exact separation possible up to this n
  long max_pivots = 4'000'000;
  double tol = 1e-9;
  std::size_t max_active_rows = 4000;  // active-pair working set bound
};

// Restricted master over a working cut family (singletons, metric balls,
// coordinate half-spaces), grown by dual separation (bit-flip hill climbing
// with random restarts). Pair constraints are activated lazily so that large
// spaces stay within the dense-tableau budget; the master is always solved
// to optimality over the full pair set before separation. Status is
// ExactCertified only when exhaustive separation proves no violated column.
DistortionResult min_distortion_colgen(const FiniteMetricSpace& space,
                                       const ColgenOptions& opts = {});

struct WitnessReport {
  double max_nonexpansive_violation = 0.0;  // max over pairs of d_Sigma - d
  double max_colipschitz_violation = 0.0;   // max over pairs of s·d - d_Sigma
  double min_ratio = 0.0;                   // min over pairs of d_Sigma / d
  double achieved_distortion = 0.0;         // 1 / min_ratio
  bool infinite = false;                    // some pair got d_Sigma = 0
};

WitnessReport verify_witness(const FiniteMetricSpace& space,
                             const DistortionResult& result);

}  // namespace heiscut
