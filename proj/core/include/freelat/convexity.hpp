#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "freelat/expr.hpp"
#include "freelat/geometry.hpp"
#include "freelat/norms.hpp"

namespace fbl {

using Evaluable = std::function<double(const Vec&)>;

/// Positively homogeneous function of n real arguments: either a
/// lattice-linear expression whose generators live in R^n (the formal
/// variables), or the built-in family c^n_p(t) = (sum |t_i|^p)^(1/p),
/// with c^n_inf(t) = max |t_i|.
struct HomogeneousFunction {
  int arity = 0;
  ExprPtr expr;            // null for built-ins
  double builtin_p = 0.0;  // meaningful only when expr is null

  double operator()(const Vec& t) const;

  static HomogeneousFunction from_expr(int arity, ExprPtr e);
  static HomogeneousFunction builtin_cp(int arity, double p);
  bool is_builtin() const { return expr == nullptr; }
};

/// One convexity implication: if every antecedent of the tuple is <= 0,
/// then ||c1(f_1,...,f_n)|| <= c2(||f_1||,...,||f_n||) must hold for every
/// consequent pair (c1, c2); c2 is increasing on the positive orthant.
struct ConvexityImplication {
  int arity = 0;
  std::vector<HomogeneousFunction> antecedents;
  std::vector<std::pair<HomogeneousFunction, HomogeneousFunction>> consequents;
};

struct ConvexityType {
  std::vector<ConvexityImplication> implications;
};

/// Pointwise composition x* |-> h(f_1(x*), ..., f_n(x*)).
Evaluable calculus_apply(const HomogeneousFunction& h,
                         std::vector<Evaluable> fs);

/// h applied to lattice expressions is again a lattice expression whenever
/// h itself is expressible (expression body, or the built-ins c_1 / c_inf).
/// Returns nullopt for the remaining built-ins (finite p != 1).
std::optional<ExprPtr> compose_expr(const HomogeneousFunction& h,
                                    const std::vector<ExprPtr>& fs);

struct ConvexityCandidate {
  int trial = -1;
  int consequent = -1;
  double lhs = 0.0;  // after the 4x recheck
  double rhs = 0.0;
  std::vector<ExprPtr> tuple;
};

struct ImplicationReport {
  int trials = 0;
  int filtered_out = 0;  // tuples rejected by the antecedent filter
  int passes = 0;
  std::vector<ConvexityCandidate> candidates;

  double filter_rate() const {
    return trials == 0 ? 0.0 : double(filtered_out) / double(trials);
  }
};

/// Fuzzes the implication with `trials` random expression tuples.
/// Antecedents are screened on a fixed barycentric grid over B+ plus
/// `random_points` sampled points; surviving tuples are checked with the
/// engine. Violations are re-checked with a 4x search budget before being
/// reported (finite-p norms are lower bounds on both sides, so a violation
/// is only ever a candidate).
ImplicationReport check_implication(const PreorderedSpace& space,
                                    const NormEngine& engine,
                                    const ConvexityImplication& impl,
                                    int trials, std::uint64_t seed,
                                    int random_points = 500);

struct PConvexityReport {
  double p = 1.0;
  double lhs = 0.0;          // ||(sum |f_i|^p)^(1/p)||
  double rhs = 0.0;          // (sum ||f_i||^p)^(1/p)
  std::vector<double> norms; // the individual ||f_i|| estimates
  double tol = 0.0;
  bool pass = false;
};

/// Checks p-convexity with constant 1 on a concrete tuple: for p = inf both
/// sides are exact, for finite p both sides come from the search engine.
PConvexityReport p_convexity_check(const PreorderedSpace& space, double p,
                                   const std::vector<ExprPtr>& fs,
                                   const SearchParams& params = {},
                                   double tol = 5e-3);

/// Sampled monotonicity on the positive orthant: h(t) <= h(s) for random
/// 0 <= t <= s.
bool check_increasing(const HomogeneousFunction& h, int samples,
                      std::uint64_t seed);

/// Sampled positive homogeneity to 1e-12.
bool spot_check_homogeneous(const HomogeneousFunction& h, int samples,
                            std::uint64_t seed);

/// Every implication instantiated over the scalars (norm = absolute value):
/// true iff no sampled violation. The scalar lattice must satisfy any
/// convexity type this library accepts.
bool scalar_convexity_check(const ConvexityType& ct, int samples,
                            std::uint64_t seed);

}  // namespace fbl
