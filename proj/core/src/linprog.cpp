#include "freelat/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fbl {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-8;
constexpr int kBlandAfter = 2000;
constexpr int kMaxIter = 200000;

// Row-major tableau of size (rows+1) x (cols+1): last row holds reduced
// costs, last column the right-hand side. basis[i] is the column basic in
// row i.
struct Tableau {
  std::vector<Vec> t;
  std::vector<int> basis;
  int rows = 0;
  int cols = 0;
  std::vector<bool> blocked;  // columns that may never enter

  void pivot(int pr, int pc) {
    Vec& prow = t[pr];
    const double piv = prow[pc];
    for (double& v : prow) v /= piv;
    prow[pc] = 1.0;
    for (int i = 0; i <= rows; ++i) {
      if (i == pr) continue;
      double f = t[i][pc];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) t[i][j] -= f * prow[j];
      t[i][pc] = 0.0;
    }
    basis[pr] = pc;
  }

  // Runs simplex iterations on the current objective row. Returns false on
  // an unbounded ray.
  bool iterate(int& iter_count) {
    for (;;) {
      if (++iter_count > kMaxIter)
        throw std::runtime_error("simplex: iteration limit exceeded");
      const bool bland = iter_count > kBlandAfter;
      int enter = -1;
      double best = -kCostTol;
      for (int j = 0; j < cols; ++j) {
        if (blocked[j]) continue;
        double rc = t[rows][j];
        if (rc < best) {
          enter = j;
          if (bland) break;
          best = rc;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows; ++i) {
        double a = t[i][enter];
        if (a <= kPivotTol) continue;
        double ratio = t[i][cols] / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && leave >= 0 &&
             basis[i] < basis[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpSolution maximize(const LinearProgram& lp) {
  const int n = lp.num_vars;
  // Column layout: one column per nonnegative variable, two (pos, neg) per
  // free variable, then slacks, then artificials.
  std::vector<int> col_of(n, -1);
  std::vector<int> neg_col_of(n, -1);
  int struct_cols = 0;
  for (int i = 0; i < n; ++i) {
    col_of[i] = struct_cols++;
    if (!lp.nonneg[i]) neg_col_of[i] = struct_cols++;
  }
  const int m_ineq = static_cast<int>(lp.ineq_coeffs.size());
  const int m_eq = static_cast<int>(lp.eq_coeffs.size());
  const int rows = m_ineq + m_eq;
  const int slack0 = struct_cols;
  const int art0 = slack0 + m_ineq;
  const int cols = art0 + rows;  // worst case: one artificial per row

  Tableau tab;
  tab.rows = rows;
  tab.cols = cols;
  tab.t.assign(rows + 1, Vec(cols + 1, 0.0));
  tab.basis.assign(rows, -1);
  tab.blocked.assign(cols, false);

  auto load_row = [&](int r, const Vec& coeffs, double rhs) {
    double sign = rhs < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) {
      tab.t[r][col_of[i]] = sign * coeffs[i];
      if (neg_col_of[i] >= 0) tab.t[r][neg_col_of[i]] = -sign * coeffs[i];
    }
    tab.t[r][cols] = sign * rhs;
    return sign;
  };

  int n_art = 0;
  for (int r = 0; r < m_ineq; ++r) {
    double sign = load_row(r, lp.ineq_coeffs[r], lp.ineq_rhs[r]);
    tab.t[r][slack0 + r] = sign;  // slack
    if (sign > 0.0) {
      tab.basis[r] = slack0 + r;
    } else {
      tab.t[r][art0 + n_art] = 1.0;
      tab.basis[r] = art0 + n_art++;
    }
  }
  for (int r = 0; r < m_eq; ++r) {
    load_row(m_ineq + r, lp.eq_coeffs[r], lp.eq_rhs[r]);
    tab.t[m_ineq + r][art0 + n_art] = 1.0;
    tab.basis[m_ineq + r] = art0 + n_art++;
  }
  for (int j = art0 + n_art; j < cols; ++j) tab.blocked[j] = true;

  int iters = 0;

  // Phase 1: drive the artificials to zero.
  if (n_art > 0) {
    for (int j = art0; j < art0 + n_art; ++j) tab.t[rows][j] = 1.0;
    for (int r = 0; r < rows; ++r) {
      if (tab.basis[r] >= art0) {
        for (int j = 0; j <= cols; ++j) tab.t[rows][j] -= tab.t[r][j];
      }
    }
    tab.iterate(iters);  // bounded below by 0, cannot be unbounded
    if (tab.t[rows][cols] < -kFeasTol) {
      return LpSolution{LpStatus::Infeasible, 0.0, {}};
    }
    // Pivot any artificial still basic (at zero) out of the basis; a row
    // with no eligible column is redundant and stays inert.
    for (int r = 0; r < rows; ++r) {
      if (tab.basis[r] < art0) continue;
      for (int j = 0; j < art0; ++j) {
        if (std::abs(tab.t[r][j]) > 1e-8) {
          tab.pivot(r, j);
          break;
        }
      }
    }
    for (int j = art0; j < cols; ++j) tab.blocked[j] = true;
  }

  // Phase 2: the real objective.
  for (int j = 0; j <= cols; ++j) tab.t[rows][j] = 0.0;
  for (int i = 0; i < n; ++i) {
    tab.t[rows][col_of[i]] = -lp.objective[i];
    if (neg_col_of[i] >= 0) tab.t[rows][neg_col_of[i]] = lp.objective[i];
  }
  for (int r = 0; r < rows; ++r) {
    int b = tab.basis[r];
    if (b >= 0 && b < cols && tab.t[rows][b] != 0.0) {
      double f = tab.t[rows][b];
      for (int j = 0; j <= cols; ++j) tab.t[rows][j] -= f * tab.t[r][j];
    }
  }
  if (!tab.iterate(iters)) {
    return LpSolution{LpStatus::Unbounded, 0.0, {}};
  }

  Vec std_vals(cols, 0.0);
  for (int r = 0; r < rows; ++r) {
    if (tab.basis[r] >= 0) std_vals[tab.basis[r]] = tab.t[r][cols];
  }
  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.point.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    sol.point[i] = std_vals[col_of[i]];
    if (neg_col_of[i] >= 0) sol.point[i] -= std_vals[neg_col_of[i]];
  }
  sol.value = dot(lp.objective, sol.point);
  return sol;
}

bool conic_member(const std::vector<Vec>& generators, const Vec& x, double tol) {
  // Scale invariance: test x / max|x| instead, so the phase-1 tolerance is
  // meaningful regardless of the magnitude of x.
  double s = max_abs(x);
  if (s <= tol) return true;  // the zero vector lies in every wedge
  Vec xs = scaled(x, 1.0 / s);
  if (generators.empty()) return false;

  const int k = static_cast<int>(generators.size());
  const int d = static_cast<int>(x.size());
  LinearProgram lp(k);
  lp.nonneg.assign(k, true);
  for (int c = 0; c < d; ++c) {
    Vec row(k);
    for (int i = 0; i < k; ++i) row[i] = generators[i][c];
    lp.add_eq(std::move(row), xs[c]);
  }
  return maximize(lp).status == LpStatus::Optimal;
}

bool convex_member(const std::vector<Vec>& points, const Vec& x, double tol) {
  (void)tol;
  if (points.empty()) return false;
  const int k = static_cast<int>(points.size());
  const int d = static_cast<int>(x.size());
  LinearProgram lp(k);
  lp.nonneg.assign(k, true);
  for (int c = 0; c < d; ++c) {
    Vec row(k);
    for (int i = 0; i < k; ++i) row[i] = points[i][c];
    lp.add_eq(std::move(row), x[c]);
  }
  lp.add_eq(Vec(k, 1.0), 1.0);
  return maximize(lp).status == LpStatus::Optimal;
}

}  // namespace fbl
