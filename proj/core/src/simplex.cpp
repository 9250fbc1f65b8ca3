#include "heiscut/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace heiscut {

LpResult simplex_solve(std::size_t m, std::size_t n,
                       const std::vector<double>& A,
                       const std::vector<double>& b,
                       const std::vector<double>& c, long max_pivots,
                       double tol, const std::vector<std::size_t>* warm) {
  if (A.size() != m * n || b.size() != m || c.size() != n)
    throw std::invalid_argument("simplex_solve: dimension mismatch");
  for (double v : b)
    if (v < 0.0)
      throw std::invalid_argument("simplex_solve: requires b >= 0");

  // tableau columns: n structural + m slacks + rhs
  std::size_t width = n + m + 1;
  std::vector<double> T(m * width, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i * width + j] = A[i * n + j];
    T[i * width + n + i] = 1.0;
    T[i * width + n + m] = b[i];
  }
  // reduced-cost row; an eligible entering column has value > tol
  std::vector<double> Z(width, 0.0);
  for (std::size_t j = 0; j < n; ++j) Z[j] = c[j];

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  // re-establish a prior basis by Gauss-Jordan; rebuilding costs m pivots
  // but saves the full re-optimization when only columns were added
  if (warm && warm->size() == m) {
    std::vector<char> used(m, 0);
    bool ok = true;
    for (std::size_t slot = 0; slot < m && ok; ++slot) {
      std::size_t var = (*warm)[slot];
      if (var >= n + m) {
        ok = false;
        break;
      }
      // best remaining pivot row for this variable
      std::size_t row = m;
      double mag = 1e-7;
      for (std::size_t i = 0; i < m; ++i) {
        if (used[i]) continue;
        double v = std::fabs(T[i * width + var]);
        if (v > mag) {
          mag = v;
          row = i;
        }
      }
      if (row == m) {
        ok = false;
        break;
      }
      used[row] = 1;
      double inv = 1.0 / T[row * width + var];
      double* prow = &T[row * width];
      for (std::size_t j = 0; j < width; ++j) prow[j] *= inv;
      prow[var] = 1.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (i == row) continue;
        double f = T[i * width + var];
        if (f == 0.0) continue;
        double* r = &T[i * width];
        for (std::size_t j = 0; j < width; ++j) r[j] -= f * prow[j];
        r[var] = 0.0;
      }
      double fz = Z[var];
      if (fz != 0.0) {
        for (std::size_t j = 0; j < width; ++j) Z[j] -= fz * prow[j];
        Z[var] = 0.0;
      }
      basis[row] = var;
    }
    bool feasible = ok;
    if (ok)
      for (std::size_t i = 0; i < m; ++i)
        if (T[i * width + n + m] < -tol) feasible = false;
    if (!feasible) {
      // rebuild failed (degenerate column or infeasible rhs): cold start
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) T[i * width + j] = A[i * n + j];
        for (std::size_t j = n; j < n + m; ++j) T[i * width + j] = 0.0;
        T[i * width + n + i] = 1.0;
        T[i * width + n + m] = b[i];
        basis[i] = n + i;
      }
      Z.assign(width, 0.0);
      for (std::size_t j = 0; j < n; ++j) Z[j] = c[j];
    }
  }

  LpResult res;
  res.x.assign(n, 0.0);
  res.duals.assign(m, 0.0);

  // Dantzig pricing for speed; once the objective stalls too long the rule
  // switches permanently to Bland's, which cannot cycle.
  bool bland = false;
  long stall = 0;
  const long stall_limit = 4 * static_cast<long>(m + n) + 64;
  double last_objective = 0.0;

  for (;;) {
    std::size_t enter = width;
    if (!bland) {
      double best = tol;
      for (std::size_t j = 0; j < n + m; ++j)
        if (Z[j] > best) {
          best = Z[j];
          enter = j;
        }
    } else {
      for (std::size_t j = 0; j < n + m; ++j)
        if (Z[j] > tol) {
          enter = j;
          break;
        }
    }
    if (enter == width) break;  // optimal

    // lexicographic ratio test: ties on the ratio are broken by comparing
    // the pivot-scaled rows column by column, which blocks cycling on the
    // heavily degenerate masters
    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> ties;
    // two passes: prefer pivots of solid magnitude, fall back to any
    // eligible one (tiny pivots blow up the tableau)
    for (double guard : {1e-7, tol}) {
      for (std::size_t i = 0; i < m; ++i) {
        double a = T[i * width + enter];
        if (a > guard) {
          double ratio = T[i * width + n + m] / a;
          if (ratio < best - 1e-12) {
            best = ratio;
            ties.clear();
            ties.push_back(i);
          } else if (ratio <= best + 1e-12) {
            ties.push_back(i);
          }
        }
      }
      if (!ties.empty()) break;
    }
    if (ties.empty()) {
      res.status = LpResult::Status::Unbounded;
      return res;
    }
    // lex order: rhs, slack block, structurals; the slack-identity start
    // makes every row lex-positive in this order, so cycling is blocked
    leave = ties[0];
    auto lex_column = [&](std::size_t k) {
      if (k == 0) return n + m;            // rhs
      if (k <= m) return n + (k - 1);      // slacks
      return k - m - 1;                    // structurals
    };
    for (std::size_t t = 1; t < ties.size(); ++t) {
      std::size_t i = ties[t];
      double ai = T[i * width + enter];
      double al = T[leave * width + enter];
      for (std::size_t k = 0; k <= n + m; ++k) {
        std::size_t j = lex_column(k);
        double vi = T[i * width + j] / ai;
        double vl = T[leave * width + j] / al;
        if (vi < vl) {
          leave = i;
          break;
        }
        if (vi > vl) break;
      }
    }
    if (++res.pivots > max_pivots) {
      res.status = LpResult::Status::PivotLimit;
      break;
    }

    // pivot on (leave, enter)
    double piv = T[leave * width + enter];
    double inv = 1.0 / piv;
    double* prow = &T[leave * width];
    for (std::size_t j = 0; j < width; ++j) prow[j] *= inv;
    prow[enter] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = T[i * width + enter];
      if (f == 0.0) continue;
      double* row = &T[i * width];
      for (std::size_t j = 0; j < width; ++j) row[j] -= f * prow[j];
      row[enter] = 0.0;
    }
    double fz = Z[enter];
    if (fz != 0.0) {
      for (std::size_t j = 0; j < width; ++j) Z[j] -= fz * prow[j];
      Z[enter] = 0.0;
    }
    basis[leave] = enter;

    if (!bland) {
      double obj = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) obj += c[basis[i]] * T[i * width + n + m];
      if (obj > last_objective + tol) {
        last_objective = obj;
        stall = 0;
      } else if (++stall > stall_limit) {
        bland = true;
      }
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) res.x[basis[i]] = T[i * width + n + m];
    res.objective += (basis[i] < n ? c[basis[i]] : 0.0) * T[i * width + n + m];
  }
  // dual values are the negated reduced costs of the slack columns
  for (std::size_t i = 0; i < m; ++i) res.duals[i] = -Z[n + i];
  res.basis = std::move(basis);
  return res;
}

}  // namespace heiscut
