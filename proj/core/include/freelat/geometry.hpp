#pragma once

#include <vector>

#include "freelat/vec.hpp"

namespace fbl {

/// Global geometric tolerance for membership / equality tests.
inline constexpr double kGeoTol = 1e-9;

/// Closed halfspace {x : <normal, x> <= offset}.
struct Halfspace {
  Vec normal;
  double offset = 0.0;

  bool satisfied(const Vec& x, double tol = kGeoTol) const {
    return dot(normal, x) <= offset + tol;
  }
};

/// Bounded polyhedron carried in both representations. May be
/// lower-dimensional (a segment or a single point are fine); vertices are
/// kept sorted lexicographically so equal sets compare equal.
struct Polytope {
  int dim = 0;
  std::vector<Vec> vertices;
  std::vector<Halfspace> halfspaces;

  bool contains(const Vec& x, double tol = kGeoTol) const;

  /// Cross-membership check: every vertex satisfies every halfspace, and
  /// re-enumerating the halfspace system reproduces the vertex hull.
  bool consistent(double tol = kGeoTol) const;
};

/// Enumerates the vertices of the (assumed bounded) intersection of the
/// given halfspaces: every dim-subset with independent normals is solved and
/// the solution kept when it satisfies the whole system. Deduplicated and
/// sorted. Throws std::invalid_argument when the subset count is absurd.
std::vector<Vec> enumerate_vertices(const std::vector<Halfspace>& halfspaces,
                                    int dim, double tol = kGeoTol);

/// All convex combinations of the given points with barycentric weights on
/// the grid {0, 1/r, ..., 1}. Covers the hull ever more densely as r grows.
std::vector<Vec> simplex_grid(const std::vector<Vec>& points, int resolution);

/// Finite-dimensional pre-ordered Banach space with a polyhedral unit ball
/// (given by its symmetric vertex list) and a finitely generated wedge.
/// The dual ball and its positive part are computed once at construction;
/// the object is immutable afterwards and safe to share across threads.
class PreorderedSpace {
 public:
  PreorderedSpace(int dim, std::vector<Vec> ball_vertices,
                  std::vector<Vec> cone_generators);

  int dim() const { return dim_; }
  const std::vector<Vec>& ball_vertices() const { return ball_vertices_; }
  const std::vector<Vec>& cone_generators() const { return cone_generators_; }

  /// The unit ball itself (halfspace form derived from the dual vertices).
  const Polytope& ball() const { return ball_; }
  const Polytope& dual_ball() const { return dual_ball_; }
  const Polytope& positive_dual() const { return positive_dual_; }

 private:
  int dim_;
  std::vector<Vec> ball_vertices_;
  std::vector<Vec> cone_generators_;
  Polytope ball_;
  Polytope dual_ball_;
  Polytope positive_dual_;
};

/// A functional x* on X, acting by the standard pairing.
struct DualFunctional {
  Vec coords;

  bool in_dual_ball(const PreorderedSpace& space, double tol = kGeoTol) const;
  /// x*(g) >= 0 for every cone generator g.
  bool positive(const PreorderedSpace& space, double tol = kGeoTol) const;
};

/// The dual unit ball B_X* = {x* : |x*(v)| <= 1 for every ball vertex v}.
Polytope polar_ball(const PreorderedSpace& space);

/// B+ = B_X* cut down to the functionals nonnegative on the wedge.
Polytope dual_positive_part(const PreorderedSpace& space);

/// Gauge of the unit ball: min{t >= 0 : x in t*ball}, solved as a
/// one-variable LP over the ball's halfspace form.
double space_norm(const PreorderedSpace& space, const Vec& x);

/// True iff the wedge is a cone (wedge intersected with its negation is 0).
bool is_cone(const PreorderedSpace& space);

/// Primal order test: is x a nonnegative combination of the generators?
bool cone_membership(const PreorderedSpace& space, const Vec& x);

/// Dual order test: x*(x) >= 0 for every x* in B+. Agrees with the primal
/// test because finitely generated wedges are closed.
bool dual_cone_membership(const PreorderedSpace& space, const Vec& x,
                          double tol = kGeoTol);

/// True iff B+ spans the dual, i.e. no nonzero vector is annihilated by
/// every positive functional.
bool separates_points(const PreorderedSpace& space);

/// True iff conv(B+ u -B+) = B_X*, i.e. the positive functionals already
/// compute the norm of every vector.
bool is_norming(const PreorderedSpace& space);

}  // namespace fbl
