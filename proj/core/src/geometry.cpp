#include "freelat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "freelat/linprog.hpp"

namespace fbl {
namespace {

void sort_vertices(std::vector<Vec>& pts) {
  std::sort(pts.begin(), pts.end());
}

std::vector<Vec> dedupe(std::vector<Vec> pts, double tol) {
  // Canonical zero keeps reports and sort order free of -0.0.
  for (auto& p : pts)
    for (auto& t : p)
      if (t == 0.0) t = 0.0;
  std::vector<Vec> out;
  for (auto& p : pts) {
    bool seen = false;
    for (const auto& q : out) {
      if (approx_eq(p, q, tol)) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(std::move(p));
  }
  sort_vertices(out);
  return out;
}

}  // namespace

bool Polytope::contains(const Vec& x, double tol) const {
  for (const auto& h : halfspaces) {
    if (!h.satisfied(x, tol)) return false;
  }
  return true;
}

bool Polytope::consistent(double tol) const {
  for (const auto& v : vertices) {
    if (!contains(v, tol)) return false;
  }
  std::vector<Vec> redo = enumerate_vertices(halfspaces, dim, tol);
  for (const auto& v : redo) {
    if (!convex_member(vertices, v, tol)) return false;
  }
  for (const auto& v : vertices) {
    if (!convex_member(redo, v, tol)) return false;
  }
  return true;
}

std::vector<Vec> enumerate_vertices(const std::vector<Halfspace>& halfspaces,
                                    int dim, double tol) {
  const int h = static_cast<int>(halfspaces.size());
  if (h < dim) return {};
  double subsets = 1.0;
  for (int i = 0; i < dim; ++i) subsets *= double(h - i) / double(i + 1);
  if (subsets > 2e6)
    throw std::invalid_argument(
        "enumerate_vertices: too many halfspace subsets (" +
        std::to_string(static_cast<long long>(subsets)) + ")");

  std::vector<Vec> found;
  std::vector<int> idx(dim);
  for (int i = 0; i < dim; ++i) idx[i] = i;
  for (;;) {
    std::vector<Vec> m(dim);
    Vec rhs(dim);
    for (int i = 0; i < dim; ++i) {
      m[i] = halfspaces[idx[i]].normal;
      rhs[i] = halfspaces[idx[i]].offset;
    }
    Vec pt;
    if (solve_square(m, rhs, pt)) {
      bool ok = true;
      for (const auto& hs : halfspaces) {
        if (!hs.satisfied(pt, tol)) {
          ok = false;
          break;
        }
      }
      if (ok) found.push_back(std::move(pt));
    }
    // next dim-combination of {0..h-1}
    int k = dim - 1;
    while (k >= 0 && idx[k] == h - dim + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < dim; ++j) idx[j] = idx[j - 1] + 1;
  }
  return dedupe(std::move(found), 1e-7);
}

std::vector<Vec> simplex_grid(const std::vector<Vec>& points, int resolution) {
  if (points.empty() || resolution < 1)
    throw std::invalid_argument("simplex_grid: need points and resolution >= 1");
  const int g = static_cast<int>(points.size());
  const int d = static_cast<int>(points[0].size());
  std::vector<Vec> out;
  std::vector<int> k(g, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == g - 1) {
      k[pos] = left;
      Vec pt(d, 0.0);
      for (int i = 0; i < g; ++i)
        add_scaled(pt, double(k[i]) / double(resolution), points[i]);
      out.push_back(std::move(pt));
      return;
    }
    for (int t = 0; t <= left; ++t) {
      k[pos] = t;
      self(self, pos + 1, left - t);
    }
  };
  rec(rec, 0, resolution);
  return out;
}

PreorderedSpace::PreorderedSpace(int dim, std::vector<Vec> ball_vertices,
                                 std::vector<Vec> cone_generators)
    : dim_(dim),
      ball_vertices_(std::move(ball_vertices)),
      cone_generators_(std::move(cone_generators)) {
  if (dim_ < 1) throw std::invalid_argument("space: dim must be positive");
  if (ball_vertices_.empty())
    throw std::invalid_argument("space: ball_vertices empty");
  for (const auto& v : ball_vertices_) {
    if (static_cast<int>(v.size()) != dim_)
      throw std::invalid_argument("space: ball vertex has wrong dimension");
  }
  for (const auto& g : cone_generators_) {
    if (static_cast<int>(g.size()) != dim_)
      throw std::invalid_argument("space: cone generator has wrong dimension");
  }
  for (const auto& v : ball_vertices_) {
    bool has_neg = false;
    for (const auto& u : ball_vertices_) {
      if (approx_eq(u, negated(v), kGeoTol)) {
        has_neg = true;
        break;
      }
    }
    if (!has_neg)
      throw std::invalid_argument(
          "space: ball_vertices not symmetric (missing -v for some v)");
  }
  if (rank(ball_vertices_) != dim_)
    throw std::invalid_argument(
        "space: ball is not full-dimensional (gauge would not be a norm)");

  // Dual ball: halfspaces <v, x*> <= 1 over the (symmetric) vertex list.
  dual_ball_.dim = dim_;
  for (const auto& v : ball_vertices_) {
    dual_ball_.halfspaces.push_back({v, 1.0});
  }
  dual_ball_.vertices = enumerate_vertices(dual_ball_.halfspaces, dim_);

  // Bipolarity gives the ball's own halfspace form for free.
  ball_.dim = dim_;
  ball_.vertices = ball_vertices_;
  sort_vertices(ball_.vertices);
  for (const auto& w : dual_ball_.vertices) {
    ball_.halfspaces.push_back({w, 1.0});
  }

  positive_dual_.dim = dim_;
  positive_dual_.halfspaces = dual_ball_.halfspaces;
  for (const auto& g : cone_generators_) {
    positive_dual_.halfspaces.push_back({negated(g), 0.0});
  }
  positive_dual_.vertices = enumerate_vertices(positive_dual_.halfspaces, dim_);
  if (positive_dual_.vertices.empty())
    throw std::invalid_argument(
        "space: positive dual part came out empty (0 should always belong)");
}

bool DualFunctional::in_dual_ball(const PreorderedSpace& space,
                                  double tol) const {
  for (const auto& v : space.ball_vertices()) {
    if (std::abs(dot(coords, v)) > 1.0 + tol) return false;
  }
  return true;
}

bool DualFunctional::positive(const PreorderedSpace& space, double tol) const {
  for (const auto& g : space.cone_generators()) {
    if (dot(coords, g) < -tol) return false;
  }
  return true;
}

Polytope polar_ball(const PreorderedSpace& space) { return space.dual_ball(); }

Polytope dual_positive_part(const PreorderedSpace& space) {
  return space.positive_dual();
}

double space_norm(const PreorderedSpace& space, const Vec& x) {
  if (static_cast<int>(x.size()) != space.dim())
    throw std::invalid_argument("space_norm: vector has wrong dimension");
  // min t >= 0 subject to <w, x> <= t for every halfspace normal w of the
  // ball; run as maximize -t.
  LinearProgram lp(1);
  lp.nonneg[0] = true;
  lp.objective[0] = -1.0;
  for (const auto& h : space.ball().halfspaces) {
    lp.add_le(Vec{-1.0}, -dot(h.normal, x));
  }
  LpSolution sol = maximize(lp);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("space_norm: gauge LP failed");
  return -sol.value;
}

bool is_cone(const PreorderedSpace& space) {
  for (const auto& g : space.cone_generators()) {
    if (max_abs(g) <= kGeoTol) continue;
    if (conic_member(space.cone_generators(), negated(g), kGeoTol))
      return false;
  }
  return true;
}

bool cone_membership(const PreorderedSpace& space, const Vec& x) {
  if (static_cast<int>(x.size()) != space.dim())
    throw std::invalid_argument("cone_membership: wrong dimension");
  return conic_member(space.cone_generators(), x, kGeoTol);
}

bool dual_cone_membership(const PreorderedSpace& space, const Vec& x,
                          double tol) {
  if (static_cast<int>(x.size()) != space.dim())
    throw std::invalid_argument("dual_cone_membership: wrong dimension");
  double scale = std::max(1.0, max_abs(x));
  for (const auto& w : space.positive_dual().vertices) {
    if (dot(w, x) < -tol * scale) return false;
  }
  return true;
}

bool separates_points(const PreorderedSpace& space) {
  return rank(space.positive_dual().vertices) == space.dim();
}

bool is_norming(const PreorderedSpace& space) {
  std::vector<Vec> sym = space.positive_dual().vertices;
  const size_t n = sym.size();
  for (size_t i = 0; i < n; ++i) sym.push_back(negated(sym[i]));
  for (const auto& w : space.dual_ball().vertices) {
    if (!convex_member(sym, w, kGeoTol)) return false;
  }
  return true;
}

}  // namespace fbl
