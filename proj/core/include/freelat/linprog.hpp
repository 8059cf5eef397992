#pragma once

#include <vector>

#include "freelat/vec.hpp"

namespace fbl {

/// Dense linear program: maximize objective·x subject to
/// ineq[i]·x <= ineq_rhs[i], eq[i]·x == eq_rhs[i], and x_i >= 0 for the
/// variables flagged nonneg (free otherwise).
///
/// Sized for the polyhedral problems of this library (a handful of
/// variables, tens of rows); solved by a two-phase dense simplex with a
/// Bland fallback against cycling.
struct LinearProgram {
  int num_vars = 0;
  Vec objective;
  std::vector<Vec> ineq_coeffs;
  Vec ineq_rhs;
  std::vector<Vec> eq_coeffs;
  Vec eq_rhs;
  std::vector<bool> nonneg;

  explicit LinearProgram(int vars)
      : num_vars(vars), objective(vars, 0.0), nonneg(vars, false) {}

  void add_le(Vec coeffs, double rhs) {
    ineq_coeffs.push_back(std::move(coeffs));
    ineq_rhs.push_back(rhs);
  }
  void add_eq(Vec coeffs, double rhs) {
    eq_coeffs.push_back(std::move(coeffs));
    eq_rhs.push_back(rhs);
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Vec point;
};

/// Throws std::runtime_error when the simplex fails to terminate within its
/// iteration budget (never observed on well-posed inputs of this size).
LpSolution maximize(const LinearProgram& lp);

/// Is x a nonnegative combination of the generators? (Feasibility phase only.)
bool conic_member(const std::vector<Vec>& generators, const Vec& x, double tol);

/// Is x in the convex hull of the given points?
bool convex_member(const std::vector<Vec>& points, const Vec& x, double tol);

}  // namespace fbl
