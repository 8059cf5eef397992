#include "freelat/expr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbl {
namespace {

using Ragged = std::vector<std::vector<Vec>>;

constexpr std::size_t kMaxNormalCells = 1u << 21;  // vectors, not bytes

void check_size(std::size_t rows, std::size_t cols_hint) {
  if (rows == 0) throw std::runtime_error("normalize: empty form");
  if (rows > kMaxNormalCells || rows * std::max<std::size_t>(cols_hint, 1) >
                                    kMaxNormalCells)
    throw std::runtime_error("normalize: normal form too large");
}

Ragged ragged_scale(Ragged r, double c) {
  for (auto& row : r)
    for (auto& v : row)
      for (double& t : v) t *= c;
  return r;
}

Ragged ragged_sup(Ragged a, const Ragged& b) {
  a.insert(a.end(), b.begin(), b.end());
  check_size(a.size(), a.empty() ? 1 : a[0].size());
  return a;
}

Ragged ragged_inf(const Ragged& a, const Ragged& b) {
  Ragged out;
  check_size(a.size() * b.size(), 1);
  out.reserve(a.size() * b.size());
  for (const auto& ra : a) {
    for (const auto& rb : b) {
      std::vector<Vec> row = ra;
      row.insert(row.end(), rb.begin(), rb.end());
      out.push_back(std::move(row));
    }
  }
  return out;
}

Ragged ragged_add(const Ragged& a, const Ragged& b) {
  Ragged out;
  std::size_t cells_a = 0, cells_b = 0;
  for (const auto& r : a) cells_a += r.size();
  for (const auto& r : b) cells_b += r.size();
  if (cells_a * cells_b > kMaxNormalCells)
    throw std::runtime_error("normalize: normal form too large");
  check_size(a.size() * b.size(), 1);
  out.reserve(a.size() * b.size());
  for (const auto& ra : a) {
    for (const auto& rb : b) {
      std::vector<Vec> row;
      row.reserve(ra.size() * rb.size());
      for (const auto& u : ra) {
        for (const auto& v : rb) {
          Vec s = u;
          add_scaled(s, 1.0, v);
          row.push_back(std::move(s));
        }
      }
      out.push_back(std::move(row));
    }
  }
  return out;
}

// -(sup_k inf_l f_kl) = sup over choice functions c of inf_k (-f_{k,c(k)}).
Ragged ragged_neg(const Ragged& a) {
  double count = 1.0;
  for (const auto& row : a) count *= static_cast<double>(row.size());
  if (count * static_cast<double>(a.size()) >
      static_cast<double>(kMaxNormalCells))
    throw std::runtime_error("normalize: negation blow-up too large");

  const std::size_t m = a.size();
  Ragged out;
  std::vector<std::size_t> choice(m, 0);
  for (;;) {
    std::vector<Vec> row;
    row.reserve(m);
    for (std::size_t k = 0; k < m; ++k) row.push_back(negated(a[k][choice[k]]));
    out.push_back(std::move(row));
    std::size_t k = 0;
    while (k < m && ++choice[k] == a[k].size()) choice[k++] = 0;
    if (k == m) break;
  }
  return out;
}

Ragged build(const LatticeExpr& e, int dim) {
  switch (e.kind) {
    case ExprKind::Generator:
      return {{e.x}};
    case ExprKind::Scale: {
      Ragged r = build(*e.kids[0], dim);
      if (e.c >= 0.0) return ragged_scale(std::move(r), e.c);
      return ragged_scale(ragged_neg(r), -e.c);
    }
    case ExprKind::Add: {
      Ragged r = build(*e.kids[0], dim);
      for (std::size_t i = 1; i < e.kids.size(); ++i)
        r = ragged_add(r, build(*e.kids[i], dim));
      return r;
    }
    case ExprKind::Sup: {
      Ragged r = build(*e.kids[0], dim);
      for (std::size_t i = 1; i < e.kids.size(); ++i)
        r = ragged_sup(std::move(r), build(*e.kids[i], dim));
      return r;
    }
    case ExprKind::Inf: {
      Ragged r = build(*e.kids[0], dim);
      for (std::size_t i = 1; i < e.kids.size(); ++i)
        r = ragged_inf(r, build(*e.kids[i], dim));
      return r;
    }
    case ExprKind::Abs: {
      Ragged r = build(*e.kids[0], dim);
      Ragged nr = ragged_neg(r);
      return ragged_sup(std::move(r), nr);
    }
    case ExprKind::PosPart: {
      Ragged r = build(*e.kids[0], dim);
      return ragged_sup(std::move(r), {{zero_vec(dim)}});
    }
    case ExprKind::NegPart: {
      Ragged r = ragged_neg(build(*e.kids[0], dim));
      return ragged_sup(std::move(r), {{zero_vec(dim)}});
    }
  }
  throw std::logic_error("build: unknown node kind");
}

NormalForm rectangularize(Ragged r, int dim) {
  std::size_t n = 0;
  for (const auto& row : r) n = std::max(n, row.size());
  for (auto& row : r) {
    while (row.size() < n) row.push_back(row.back());
  }
  // duplicate-row removal, exact vector equality only
  Ragged rows;
  for (auto& row : r) {
    if (std::find(rows.begin(), rows.end(), row) == rows.end())
      rows.push_back(std::move(row));
  }
  NormalForm nf;
  nf.dim = dim;
  nf.rows = std::move(rows);
  return nf;
}

void collect_dim(const LatticeExpr& e, int& d) {
  if (e.kind == ExprKind::Generator) {
    int mine = static_cast<int>(e.x.size());
    if (d == -1) d = mine;
    if (d != mine)
      throw std::invalid_argument("expression mixes generator dimensions");
    return;
  }
  for (const auto& k : e.kids) collect_dim(*k, d);
}

ExprPtr node(ExprKind kind, std::vector<ExprPtr> kids) {
  if (kids.empty())
    throw std::invalid_argument("expression node needs at least one child");
  for (const auto& k : kids) {
    if (!k) throw std::invalid_argument("null expression child");
  }
  auto e = std::make_shared<LatticeExpr>();
  e->kind = kind;
  e->kids = std::move(kids);
  return e;
}

}  // namespace

ExprPtr gen(Vec x) {
  if (x.empty()) throw std::invalid_argument("generator needs a vector");
  auto e = std::make_shared<LatticeExpr>();
  e->kind = ExprKind::Generator;
  e->x = std::move(x);
  return e;
}

ExprPtr scale(double c, ExprPtr e) {
  if (!e) throw std::invalid_argument("null expression child");
  auto s = std::make_shared<LatticeExpr>();
  s->kind = ExprKind::Scale;
  s->c = c;
  s->kids = {std::move(e)};
  return s;
}

ExprPtr add(std::vector<ExprPtr> kids) { return node(ExprKind::Add, std::move(kids)); }
ExprPtr sup(std::vector<ExprPtr> kids) { return node(ExprKind::Sup, std::move(kids)); }
ExprPtr inf(std::vector<ExprPtr> kids) { return node(ExprKind::Inf, std::move(kids)); }
ExprPtr add(ExprPtr a, ExprPtr b) { return add({std::move(a), std::move(b)}); }
ExprPtr sup(ExprPtr a, ExprPtr b) { return sup({std::move(a), std::move(b)}); }
ExprPtr inf(ExprPtr a, ExprPtr b) { return inf({std::move(a), std::move(b)}); }
ExprPtr abs_val(ExprPtr e) { return node(ExprKind::Abs, {std::move(e)}); }
ExprPtr pos_part(ExprPtr e) { return node(ExprKind::PosPart, {std::move(e)}); }
ExprPtr neg_part(ExprPtr e) { return node(ExprKind::NegPart, {std::move(e)}); }

int expr_dim(const LatticeExpr& e) {
  int d = -1;
  collect_dim(e, d);
  return d;
}

double evaluate(const LatticeExpr& e, const Vec& xstar) {
  switch (e.kind) {
    case ExprKind::Generator:
      return dot(e.x, xstar);
    case ExprKind::Scale:
      return e.c * evaluate(*e.kids[0], xstar);
    case ExprKind::Add: {
      double s = 0.0;
      for (const auto& k : e.kids) s += evaluate(*k, xstar);
      return s;
    }
    case ExprKind::Sup: {
      double s = evaluate(*e.kids[0], xstar);
      for (std::size_t i = 1; i < e.kids.size(); ++i)
        s = std::max(s, evaluate(*e.kids[i], xstar));
      return s;
    }
    case ExprKind::Inf: {
      double s = evaluate(*e.kids[0], xstar);
      for (std::size_t i = 1; i < e.kids.size(); ++i)
        s = std::min(s, evaluate(*e.kids[i], xstar));
      return s;
    }
    case ExprKind::Abs:
      return std::abs(evaluate(*e.kids[0], xstar));
    case ExprKind::PosPart:
      return std::max(evaluate(*e.kids[0], xstar), 0.0);
    case ExprKind::NegPart:
      return std::max(-evaluate(*e.kids[0], xstar), 0.0);
  }
  throw std::logic_error("evaluate: unknown node kind");
}

double evaluate(const NormalForm& nf, const Vec& xstar) {
  if (static_cast<int>(xstar.size()) != nf.dim)
    throw std::invalid_argument("evaluate: dual point has wrong dimension");
  bool first = true;
  double best = 0.0;
  for (const auto& row : nf.rows) {
    double inner = dot(row[0], xstar);
    for (std::size_t l = 1; l < row.size(); ++l)
      inner = std::min(inner, dot(row[l], xstar));
    if (first || inner > best) best = inner;
    first = false;
  }
  return best;
}

NormalForm normalize(const LatticeExpr& e) {
  int d = expr_dim(e);
  return rectangularize(build(e, d), d);
}

NormalForm negate_normal(const NormalForm& nf) {
  return rectangularize(ragged_neg(nf.rows), nf.dim);
}

ExprPtr to_expr(const NormalForm& nf) {
  std::vector<ExprPtr> outer;
  outer.reserve(nf.rows.size());
  for (const auto& row : nf.rows) {
    std::vector<ExprPtr> inner;
    inner.reserve(row.size());
    for (const auto& v : row) inner.push_back(gen(v));
    outer.push_back(inf(std::move(inner)));
  }
  return sup(std::move(outer));
}

HomogeneityReport homogeneity_check(const LatticeExpr& e, int samples,
                                    std::uint64_t seed) {
  const int d = expr_dim(e);
  Rng rng(seed);
  HomogeneityReport rep;
  for (int s = 0; s < samples; ++s) {
    Vec xstar = rng.uniform_vec(d, -1.0, 1.0);
    double t = rng.uniform(0.0, 2.0);
    double lhs = evaluate(e, scaled(xstar, t));
    double rhs = t * evaluate(e, xstar);
    if (std::abs(lhs - rhs) > 1e-12) {
      rep.ok = false;
      rep.point = xstar;
      rep.t = t;
      rep.lhs = lhs;
      rep.rhs = rhs;
      return rep;
    }
  }
  return rep;
}

ExprPtr random_expression(int dim, int max_depth, Rng& rng) {
  if (max_depth <= 0) return gen(rng.uniform_vec(dim, -1.0, 1.0));
  switch (rng.next_index(10)) {
    case 0:
    case 1:
    case 2:
      return gen(rng.uniform_vec(dim, -1.0, 1.0));
    case 3:
      return scale(rng.uniform(-2.0, 2.0), random_expression(dim, max_depth - 1, rng));
    case 4:
      return add(random_expression(dim, max_depth - 1, rng),
                 random_expression(dim, max_depth - 1, rng));
    case 5:
      return sup(random_expression(dim, max_depth - 1, rng),
                 random_expression(dim, max_depth - 1, rng));
    case 6:
      return inf(random_expression(dim, max_depth - 1, rng),
                 random_expression(dim, max_depth - 1, rng));
    case 7:
      return abs_val(random_expression(dim, max_depth - 1, rng));
    case 8:
      return pos_part(random_expression(dim, max_depth - 1, rng));
    default:
      return neg_part(random_expression(dim, max_depth - 1, rng));
  }
}

}  // namespace fbl
