#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "freelat/rng.hpp"
#include "freelat/vec.hpp"

namespace fbl {

enum class ExprKind { Generator, Scale, Add, Sup, Inf, Abs, PosPart, NegPart };

struct LatticeExpr;
using ExprPtr = std::shared_ptr<const LatticeExpr>;

/// Lattice-linear expression over the generators delta_x. Leaves are always
/// Generator nodes, so every expression evaluates to a positively
/// homogeneous function of the dual variable. Immutable.
struct LatticeExpr {
  ExprKind kind = ExprKind::Generator;
  Vec x;           // Generator payload
  double c = 1.0;  // Scale payload (may be negative; normalize removes it)
  std::vector<ExprPtr> kids;
};

ExprPtr gen(Vec x);
ExprPtr scale(double c, ExprPtr e);
ExprPtr add(std::vector<ExprPtr> kids);
ExprPtr sup(std::vector<ExprPtr> kids);
ExprPtr inf(std::vector<ExprPtr> kids);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sup(ExprPtr a, ExprPtr b);
ExprPtr inf(ExprPtr a, ExprPtr b);
ExprPtr abs_val(ExprPtr e);
ExprPtr pos_part(ExprPtr e);
ExprPtr neg_part(ExprPtr e);

/// Common dimension of all Generator leaves; throws std::invalid_argument
/// when leaves disagree.
int expr_dim(const LatticeExpr& e);

/// Rectangular sup-of-infs form: max over rows of the min over a row of
/// <x_kl, xstar>. Rows may repeat entries (padding keeps the shape
/// rectangular).
struct NormalForm {
  int dim = 0;
  std::vector<std::vector<Vec>> rows;

  int m() const { return static_cast<int>(rows.size()); }
  int n() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }
};

double evaluate(const LatticeExpr& e, const Vec& xstar);
double evaluate(const NormalForm& nf, const Vec& xstar);

/// Rewrites e into an equivalent sup-of-infs of generators. Worst-case
/// output size is exponential in the nesting depth (negations expand by
/// choice functions); a hard cap throws std::runtime_error long before
/// memory becomes a problem.
NormalForm normalize(const LatticeExpr& e);

/// Sup-of-infs form of -nf (De Morgan plus distributivity; n^m rows of m).
NormalForm negate_normal(const NormalForm& nf);

/// The normal form read back as an expression tree.
ExprPtr to_expr(const NormalForm& nf);

struct HomogeneityReport {
  bool ok = true;
  Vec point;  // first failing x*, if any
  double t = 0.0;
  double lhs = 0.0;  // eval(t x*)
  double rhs = 0.0;  // t eval(x*)
};

/// Samples random (x*, t in [0,2]) pairs and asserts
/// eval(t x*) = t eval(x*) to 1e-12.
HomogeneityReport homogeneity_check(const LatticeExpr& e, int samples,
                                    std::uint64_t seed);

/// Random expression for property tests: generator coordinates in [-1,1],
/// scale factors in [-2,2], bounded depth.
ExprPtr random_expression(int dim, int max_depth, Rng& rng);

}  // namespace fbl
