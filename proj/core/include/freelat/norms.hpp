#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "freelat/expr.hpp"
#include "freelat/geometry.hpp"

namespace fbl {

/// Convexity index p lives in [1, inf]; this is the inf endpoint.
inline constexpr double kPInf = std::numeric_limits<double>::infinity();

/// Tuple of positive functionals forming a contractive map into l_p^N.
/// For finite p feasibility means adjoint_constraint <= 1; for p = inf it
/// means each functional lies in B+ individually.
struct FeasibleTuple {
  double p = kPInf;
  std::vector<DualFunctional> functionals;

  bool feasible(const PreorderedSpace& space, double tol = 1e-9) const;
};

struct NormEstimate {
  double value = 0.0;
  bool exact = false;
  FeasibleTuple certificate;
  int restarts_used = 0;
  std::uint64_t seed = 0;
};

/// Multi-start ascent controls. tuple_size 0 means "derive from the input"
/// (2mn for an m-by-n normal form).
struct SearchParams {
  int tuple_size = 0;
  int restarts = 64;
  int steps = 500;
  double step = 0.1;
  std::uint64_t seed = 1;
};

/// Exact sup-norm of the function nf over B+: per row one LP maximizing
/// t <= <x_kl, x*> over x* in B+, the same on the negated form, value is
/// the larger of the two. Certificate is a maximizing functional.
NormEstimate norm_inf_exact(const PreorderedSpace& space, const NormalForm& nf);

/// Operator norm of x |-> (x_1*(x), ..., x_N*(x)) into l_p^N: max over ball
/// vertices v of (sum_i |x_i*(v)|^p)^(1/p). Exact (the constraint function
/// is convex in v). The tuple is feasible iff this is <= 1.
double adjoint_constraint(const PreorderedSpace& space,
                          const std::vector<DualFunctional>& tuple, double p);

/// Certified lower bound for the p-norm of nf: maximizes
/// (sum_i |nf(x_i*)|^p)^(1/p) over feasible tuples by multi-start random
/// ascent in the cone coordinates of the functionals, rescaling by
/// adjoint_constraint. Deterministic given (seed, restarts); ties across
/// restarts resolve to the lowest restart index.
NormEstimate norm_p_lower(const PreorderedSpace& space, const NormalForm& nf,
                          double p, const SearchParams& params = {});

/// Brute-force reference for small instances: exhaustive simplex grid over
/// B+ (barycentric resolution round(1/grid_step)) for each slot of the
/// tuple, exact rescaling, then one deterministic compass refinement pass.
/// Throws std::runtime_error when the tuple count explodes.
NormEstimate norm_p_oracle(const PreorderedSpace& space, const NormalForm& nf,
                           double p, double grid_step, int tuple_size = 0);

/// Exact norm of the generator of a positive vector: LP maximizing x*(x)
/// over B+. Independent of p. Throws std::invalid_argument when x is not in
/// the wedge (the formula is only valid there).
double norm_of_generator_positive(const PreorderedSpace& space, const Vec& x);

/// Same search as norm_p_lower but for an arbitrary positively homogeneous
/// function given as a black box (functional-calculus outputs). Homogeneity
/// is spot-checked first; params.tuple_size must be set.
NormEstimate pnorm_of_evaluable(const PreorderedSpace& space,
                                const std::function<double(const Vec&)>& f,
                                double p, const SearchParams& params);

/// Which norm backs a structural check: the exact sup-norm engine when
/// p = inf, otherwise the finite-p lower-bound search with these controls.
struct NormEngine {
  double p = kPInf;
  SearchParams params;
  double tol = 1e-6;  // slack granted to the inequality under test
};

/// Engine dispatch on a normal form; budget_factor multiplies the restart
/// count (used by recheck passes).
double engine_norm(const PreorderedSpace& space, const NormEngine& engine,
                   const NormalForm& nf, int budget_factor = 1);

}  // namespace fbl
