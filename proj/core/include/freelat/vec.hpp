#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fbl {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec scaled(const Vec& a, double t) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = t * a[i];
  return r;
}

inline Vec negated(const Vec& a) { return scaled(a, -1.0); }

inline Vec sum(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("sum: dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline void add_scaled(Vec& a, double t, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += t * b[i];
}

inline double max_abs(const Vec& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline bool approx_eq(const Vec& a, const Vec& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

inline Vec zero_vec(std::size_t dim) { return Vec(dim, 0.0); }

// Rank of a list of row vectors, by Gaussian elimination with partial
// pivoting. Entries below `tol` after elimination count as zero.
inline int rank(std::vector<Vec> rows, double tol = 1e-9) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  int r = 0;
  for (std::size_t c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
    std::size_t piv = r;
    for (std::size_t i = r; i < rows.size(); ++i)
      if (std::abs(rows[i][c]) > std::abs(rows[piv][c])) piv = i;
    if (std::abs(rows[piv][c]) <= tol) continue;
    std::swap(rows[r], rows[piv]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      double f = rows[i][c] / rows[r][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  return r;
}

// Solves the square system M x = b by Gaussian elimination with partial
// pivoting. Returns false when the matrix is singular up to `tol`.
inline bool solve_square(std::vector<Vec> m, Vec b, Vec& out, double tol = 1e-12) {
  const std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c; i < n; ++i)
      if (std::abs(m[i][c]) > std::abs(m[piv][c])) piv = i;
    if (std::abs(m[piv][c]) <= tol) return false;
    std::swap(m[c], m[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t i = c + 1; i < n; ++i) {
      double f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
      b[i] -= f * b[c];
    }
  }
  out.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * out[j];
    out[i] = s / m[i][i];
  }
  return true;
}

}  // namespace fbl
