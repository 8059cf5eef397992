#pragma once
// Shared spaces and reference oracles for the test suite. The oracles are
// written against closed forms and elementary geometry on purpose: they
// must not share a code path with the engines they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "freelat/expr.hpp"
#include "freelat/geometry.hpp"
#include "freelat/rng.hpp"
#include "freelat/vec.hpp"

namespace fixtures {

using fbl::Halfspace;
using fbl::NormalForm;
using fbl::Polytope;
using fbl::PreorderedSpace;
using fbl::Vec;

/// All +-1 sign patterns: the sup-norm unit ball in d dimensions.
inline std::vector<Vec> cube_vertices(int d) {
  std::vector<Vec> out;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = ((mask >> i) & 1) ? 1.0 : -1.0;
    out.push_back(std::move(v));
  }
  return out;
}

/// Trivial wedge: every dual functional is positive, B+ is the diamond.
inline PreorderedSpace space_a() {
  return PreorderedSpace(2, cube_vertices(2), {});
}

/// Standard positive quadrant: B+ is the triangle (0,0),(1,0),(0,1).
inline PreorderedSpace space_b() {
  return PreorderedSpace(2, cube_vertices(2), {{1, 0}, {0, 1}});
}

/// Wedge = whole plane: B+ collapses to the origin.
inline PreorderedSpace space_c() {
  return PreorderedSpace(2, cube_vertices(2),
                         {{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
}

/// Wedge = closed upper halfplane: B+ is the segment (0,0)-(0,1).
inline PreorderedSpace space_e() {
  return PreorderedSpace(2, cube_vertices(2), {{1, 0}, {-1, 0}, {0, 1}});
}

/// Three-dimensional analogue of space_a (cube ball, trivial wedge).
inline PreorderedSpace space_a3() {
  return PreorderedSpace(3, cube_vertices(3), {});
}

/// One-dimensional space with the nonnegative ray as wedge.
inline PreorderedSpace space_line() {
  return PreorderedSpace(1, {{1.0}, {-1.0}}, {{1.0}});
}

/// Closed-form gauge of the cube ball: the sup norm.
inline double cube_gauge(const Vec& x) {
  double m = 0.0;
  for (double t : x) m = std::max(m, std::fabs(t));
  return m;
}

/// Closed-form dual-ball membership for the cube ball: the 1-norm.
inline double diamond_gauge(const Vec& x) {
  double s = 0.0;
  for (double t : x) s += std::fabs(t);
  return s;
}

/// 2D vertex oracle: intersect every pair of boundary lines, keep the
/// points satisfying the whole system, dedupe, sort.
inline std::vector<Vec> line_intersection_vertices(
    const std::vector<Halfspace>& hs, double tol = 1e-9) {
  std::vector<Vec> found;
  const auto n = hs.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a1 = hs[i].normal[0], b1 = hs[i].normal[1];
      const double a2 = hs[j].normal[0], b2 = hs[j].normal[1];
      const double det = a1 * b2 - a2 * b1;
      if (std::fabs(det) < 1e-12) continue;
      const double x = (hs[i].offset * b2 - hs[j].offset * b1) / det;
      const double y = (a1 * hs[j].offset - a2 * hs[i].offset) / det;
      Vec pt{x == 0.0 ? 0.0 : x, y == 0.0 ? 0.0 : y};
      bool ok = true;
      for (const auto& h : hs) {
        if (h.normal[0] * pt[0] + h.normal[1] * pt[1] > h.offset + tol) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      bool dup = false;
      for (const auto& q : found) {
        if (std::fabs(q[0] - pt[0]) < 1e-7 && std::fabs(q[1] - pt[1]) < 1e-7) {
          dup = true;
          break;
        }
      }
      if (!dup) found.push_back(std::move(pt));
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

/// Barycentric grid over the convex hull of `corners` at the given
/// resolution, written independently of the library helper.
inline std::vector<Vec> barycentric_points(const std::vector<Vec>& corners,
                                           int resolution) {
  std::vector<Vec> out;
  const int k = static_cast<int>(corners.size());
  const int d = static_cast<int>(corners[0].size());
  std::vector<int> w(k, 0);
  w[0] = resolution;
  while (true) {
    Vec pt(d, 0.0);
    for (int i = 0; i < k; ++i)
      for (int c = 0; c < d; ++c)
        pt[c] += corners[i][c] * (double(w[i]) / double(resolution));
    out.push_back(std::move(pt));
    int i = k - 2;
    while (i >= 0 && w[i] == 0) --i;
    if (i < 0) break;
    --w[i];
    int rest = w[k - 1] + 1;
    w[k - 1] = 0;
    w[i + 1] = rest;
  }
  return out;
}

/// Reference sup of |f| over a polytope: dense barycentric grid plus a
/// compass refinement over every sign-pattern direction, so walks can
/// follow polytope edges that no single axis move stays inside.
inline double grid_max_abs(const Polytope& poly,
                           const std::function<double(const Vec&)>& f,
                           int resolution, double start_delta = 0.1) {
  double best = -1.0;
  Vec arg(poly.vertices[0].size(), 0.0);
  for (const Vec& pt : barycentric_points(poly.vertices, resolution)) {
    const double v = std::fabs(f(pt));
    if (v > best) {
      best = v;
      arg = pt;
    }
  }
  const int d = static_cast<int>(arg.size());
  std::vector<Vec> dirs;
  if (d == 2) {
    // Dense fan: ascent cones of a piecewise-linear max-min can be narrow
    // wedges, so coarse compass sets stall below the true maximum.
    for (int a = 0; a < 128; ++a) {
      const double th = 2.0 * M_PI * double(a) / 128.0;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  } else {
    std::vector<int> sig(d, -1);
    for (;;) {
      Vec dir(d, 0.0);
      bool nonzero = false;
      for (int i = 0; i < d; ++i) {
        dir[i] = sig[i];
        if (sig[i] != 0) nonzero = true;
      }
      if (nonzero) dirs.push_back(std::move(dir));
      int i = 0;
      while (i < d && sig[i] == 1) sig[i++] = -1;
      if (i == d) break;
      ++sig[i];
    }
  }
  for (double delta = start_delta; delta > 1e-9; delta *= 0.5) {
    for (int sweep = 0; sweep < 50; ++sweep) {
      bool moved = false;
      for (const Vec& dir : dirs) {
        Vec cand = arg;
        for (int i = 0; i < d; ++i) cand[i] += dir[i] * delta;
        if (!poly.contains(cand)) continue;
        const double v = std::fabs(f(cand));
        if (v > best) {
          best = v;
          arg = std::move(cand);
          moved = true;
        }
      }
      if (!moved) break;
    }
  }
  return best;
}

/// Direct min-of-dots / max-of-rows evaluation of a normal form, written
/// with raw loops so it shares nothing with the library evaluators.
inline double raw_nf_value(const NormalForm& nf, const Vec& xstar) {
  double outer = -1e300;
  for (const auto& row : nf.rows) {
    double inner = 1e300;
    for (const auto& gen : row) {
      double s = 0.0;
      for (std::size_t c = 0; c < gen.size(); ++c) s += gen[c] * xstar[c];
      inner = std::min(inner, s);
    }
    outer = std::max(outer, inner);
  }
  return outer;
}

/// Random normal form with entries in [-1, 1], m rows of n generators.
inline NormalForm random_normal_form(int dim, int m, int n, fbl::Rng& rng) {
  NormalForm nf;
  nf.dim = dim;
  for (int k = 0; k < m; ++k) {
    std::vector<Vec> row;
    for (int l = 0; l < n; ++l) row.push_back(rng.uniform_vec(dim, -1.0, 1.0));
    nf.rows.push_back(std::move(row));
  }
  return nf;
}

}  // namespace fixtures
