#pragma once

#include <cstddef>
#include <vector>

namespace heiscut {

// maximize c·x subject to A x <= b, x >= 0, with b >= 0 (slack basis start).
// Dense tableau, Bland's rule (lowest eligible index), so the pivot sequence
// terminates and is deterministic.
struct LpResult {
  enum class Status { Optimal, Unbounded, PivotLimit };
  Status status = Status::Optimal;
  double objective = 0.0;
  std::vector<double> x;      // primal values, size ncols
  std::vector<double> duals;  // one multiplier per row, >= 0 at optimum
  std::vector<std::size_t> basis;  // final basic variables per row
  long pivots = 0;
};

// warm, when given, is a feasible starting basis for the same rows (as
// returned in LpResult::basis by an earlier solve over a column subset)
LpResult simplex_solve(std::size_t nrows, std::size_t ncols,
                       const std::vector<double>& A,  // nrows×ncols row-major
                       const std::vector<double>& b,
                       const std::vector<double>& c,
                       long max_pivots = 2'000'000,
                       double tol = 1e-9,
                       const std::vector<std::size_t>* warm = nullptr);

}  // namespace heiscut
