#include "freelat/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbl {
namespace {

double pow_p(double a, double p) {
  a = std::abs(a);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

double root_p(double s, double p) {
  if (p == 1.0) return s;
  if (p == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / p);
}

ExprPtr substitute(const LatticeExpr& h, const std::vector<ExprPtr>& fs) {
  if (h.kind == ExprKind::Generator) {
    std::vector<ExprPtr> terms;
    terms.reserve(h.x.size());
    for (std::size_t i = 0; i < h.x.size(); ++i)
      terms.push_back(scale(h.x[i], fs[i]));
    return add(std::move(terms));
  }
  std::vector<ExprPtr> kids;
  kids.reserve(h.kids.size());
  for (const auto& k : h.kids) kids.push_back(substitute(*k, fs));
  switch (h.kind) {
    case ExprKind::Scale:
      return scale(h.c, kids[0]);
    case ExprKind::Add:
      return add(std::move(kids));
    case ExprKind::Sup:
      return sup(std::move(kids));
    case ExprKind::Inf:
      return inf(std::move(kids));
    case ExprKind::Abs:
      return abs_val(kids[0]);
    case ExprKind::PosPart:
      return pos_part(kids[0]);
    case ExprKind::NegPart:
      return neg_part(kids[0]);
    default:
      throw std::logic_error("substitute: unknown node kind");
  }
}

/// Rows the exact engine will scan for nf: its own plus the n^m rows of the
/// negated form. The search engines never expand negations.
double inf_scan_rows(const NormalForm& nf) {
  return double(nf.m()) + std::pow(double(nf.n()), double(nf.m()));
}

/// Whether a random tuple is tractable for the exact engine: every factor
/// and every expressible consequent composition must stay well below the
/// expansion cap. Search engines accept everything.
bool tractable_tuple(const NormEngine& engine,
                     const ConvexityImplication& impl,
                     const std::vector<ExprPtr>& fs, double row_budget) {
  if (engine.p != kPInf) return true;
  try {
    double rows = 0.0;
    for (const auto& f : fs) {
      rows += inf_scan_rows(normalize(*f));
      if (rows > row_budget) return false;
    }
    for (const auto& [c1, c2] : impl.consequents) {
      if (auto composed = compose_expr(c1, fs)) {
        rows += inf_scan_rows(normalize(**composed));
        if (rows > row_budget) return false;
      }
    }
  } catch (const std::runtime_error&) {
    return false;  // normalization hit the size cap
  }
  return true;
}

double lhs_norm(const PreorderedSpace& space, const NormEngine& engine,
                const HomogeneousFunction& c1, const std::vector<ExprPtr>& fs,
                int budget_factor) {
  if (auto composed = compose_expr(c1, fs)) {
    return engine_norm(space, engine, normalize(**composed), budget_factor);
  }
  if (engine.p == kPInf)
    throw std::invalid_argument(
        "check_implication: the exact engine needs a piecewise-linear "
        "consequent");
  std::vector<Evaluable> evals;
  evals.reserve(fs.size());
  for (const auto& f : fs)
    evals.push_back([f](const Vec& x) { return evaluate(*f, x); });
  SearchParams ps = engine.params;
  ps.restarts *= budget_factor;
  if (ps.tuple_size < 1) ps.tuple_size = 8;
  return pnorm_of_evaluable(space, calculus_apply(c1, std::move(evals)),
                            engine.p, ps)
      .value;
}

}  // namespace

double HomogeneousFunction::operator()(const Vec& t) const {
  if (static_cast<int>(t.size()) != arity)
    throw std::invalid_argument("homogeneous function: arity mismatch");
  if (expr) return evaluate(*expr, t);
  if (builtin_p == kPInf) {
    double m = 0.0;
    for (double v : t) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (double v : t) s += pow_p(v, builtin_p);
  return root_p(s, builtin_p);
}

HomogeneousFunction HomogeneousFunction::from_expr(int arity, ExprPtr e) {
  if (arity < 1) throw std::invalid_argument("homogeneous function: arity >= 1");
  if (!e) throw std::invalid_argument("homogeneous function: null expression");
  if (expr_dim(*e) != arity)
    throw std::invalid_argument(
        "homogeneous function: expression arity does not match");
  HomogeneousFunction h;
  h.arity = arity;
  h.expr = std::move(e);
  return h;
}

HomogeneousFunction HomogeneousFunction::builtin_cp(int arity, double p) {
  if (arity < 1) throw std::invalid_argument("homogeneous function: arity >= 1");
  if (!(p >= 1.0))
    throw std::invalid_argument("homogeneous function: p must be >= 1");
  HomogeneousFunction h;
  h.arity = arity;
  h.builtin_p = p;
  return h;
}

Evaluable calculus_apply(const HomogeneousFunction& h,
                         std::vector<Evaluable> fs) {
  if (static_cast<int>(fs.size()) != h.arity)
    throw std::invalid_argument("calculus_apply: arity mismatch");
  return [h, fs = std::move(fs)](const Vec& xstar) {
    Vec t(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) t[i] = fs[i](xstar);
    return h(t);
  };
}

std::optional<ExprPtr> compose_expr(const HomogeneousFunction& h,
                                    const std::vector<ExprPtr>& fs) {
  if (static_cast<int>(fs.size()) != h.arity)
    throw std::invalid_argument("compose_expr: arity mismatch");
  if (h.expr) return substitute(*h.expr, fs);
  if (h.builtin_p == 1.0) {
    std::vector<ExprPtr> terms;
    for (const auto& f : fs) terms.push_back(abs_val(f));
    return add(std::move(terms));
  }
  if (h.builtin_p == kPInf) {
    std::vector<ExprPtr> terms;
    for (const auto& f : fs) terms.push_back(abs_val(f));
    return sup(std::move(terms));
  }
  return std::nullopt;
}

ImplicationReport check_implication(const PreorderedSpace& space,
                                    const NormEngine& engine,
                                    const ConvexityImplication& impl,
                                    int trials, std::uint64_t seed,
                                    int random_points) {
  if (impl.arity < 1)
    throw std::invalid_argument("check_implication: implication arity >= 1");
  const int d = space.dim();
  const auto& bverts = space.positive_dual().vertices;
  const std::vector<Vec> grid = simplex_grid(bverts, 4);

  ImplicationReport report;
  report.trials = trials;

  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(trial));
    std::vector<ExprPtr> fs;
    // Redraw tuples the exact engine cannot expand; the stream is still a
    // pure function of (seed, trial).
    for (int attempt = 0; attempt < 64; ++attempt) {
      fs.clear();
      fs.reserve(impl.arity);
      for (int i = 0; i < impl.arity; ++i)
        fs.push_back(random_expression(d, 4, rng));
      if (tractable_tuple(engine, impl, fs, 20000.0)) break;
      fs.clear();
    }
    if (fs.empty())
      throw std::runtime_error(
          "check_implication: could not draw a tractable tuple");

    std::vector<Evaluable> evals;
    evals.reserve(fs.size());
    for (const auto& f : fs)
      evals.push_back([f](const Vec& x) { return evaluate(*f, x); });

    // Antecedent screen: a(f_1,...,f_n) <= 0 must hold at every check
    // point. Tuples failing it are filtered, not judged.
    std::vector<Vec> pts = grid;
    for (int r = 0; r < random_points; ++r) {
      Vec w = rng.uniform_vec(static_cast<int>(bverts.size()), 0.0, 1.0);
      double sum = 0.0;
      for (double v : w) sum += v;
      Vec pt(d, 0.0);
      if (sum > 0.0) {
        for (std::size_t g = 0; g < bverts.size(); ++g)
          add_scaled(pt, w[g] / sum, bverts[g]);
      }
      pts.push_back(std::move(pt));
    }
    bool admitted = true;
    for (const auto& a : impl.antecedents) {
      Evaluable af = calculus_apply(a, evals);
      for (const auto& pt : pts) {
        if (af(pt) > 1e-9) {
          admitted = false;
          break;
        }
      }
      if (!admitted) break;
    }
    if (!admitted) {
      ++report.filtered_out;
      continue;
    }

    std::vector<NormalForm> nfs;
    nfs.reserve(fs.size());
    for (const auto& f : fs) nfs.push_back(normalize(*f));
    Vec norms(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i)
      norms[i] = engine_norm(space, engine, nfs[i], 1);

    bool rechecked = false;
    Vec norms4;
    bool clean = true;
    for (std::size_t ci = 0; ci < impl.consequents.size(); ++ci) {
      const auto& [c1, c2] = impl.consequents[ci];
      double lhs = lhs_norm(space, engine, c1, fs, 1);
      double rhs = c2(norms);
      if (lhs <= rhs + engine.tol) continue;
      // Candidate: redo both sides with a 4x budget before believing it.
      if (!rechecked) {
        norms4.resize(fs.size());
        for (std::size_t i = 0; i < fs.size(); ++i)
          norms4[i] = engine_norm(space, engine, nfs[i], 4);
        rechecked = true;
      }
      double lhs4 = lhs_norm(space, engine, c1, fs, 4);
      double rhs4 = c2(norms4);
      if (lhs4 > rhs4 + engine.tol) {
        clean = false;
        report.candidates.push_back({trial, static_cast<int>(ci), lhs4, rhs4, fs});
      }
    }
    if (clean) ++report.passes;
  }
  return report;
}

PConvexityReport p_convexity_check(const PreorderedSpace& space, double p,
                                   const std::vector<ExprPtr>& fs,
                                   const SearchParams& params, double tol) {
  if (!(p >= 1.0))
    throw std::invalid_argument("p_convexity_check: p must be >= 1");
  if (fs.empty())
    throw std::invalid_argument("p_convexity_check: need at least one function");

  PConvexityReport rep;
  rep.p = p;
  rep.tol = tol;

  std::vector<NormalForm> nfs;
  nfs.reserve(fs.size());
  for (const auto& f : fs) nfs.push_back(normalize(*f));

  std::vector<ExprPtr> absd;
  for (const auto& f : fs) absd.push_back(abs_val(f));

  if (p == kPInf) {
    for (const auto& nf : nfs)
      rep.norms.push_back(norm_inf_exact(space, nf).value);
    rep.lhs = norm_inf_exact(space, normalize(*sup(absd))).value;
    rep.rhs = *std::max_element(rep.norms.begin(), rep.norms.end());
  } else {
    for (const auto& nf : nfs)
      rep.norms.push_back(norm_p_lower(space, nf, p, params).value);
    double s = 0.0;
    for (double v : rep.norms) s += pow_p(v, p);
    rep.rhs = root_p(s, p);
    if (p == 1.0) {
      rep.lhs = norm_p_lower(space, normalize(*add(absd)), p, params).value;
    } else {
      std::vector<Evaluable> evals;
      for (const auto& f : fs)
        evals.push_back([f](const Vec& x) { return evaluate(*f, x); });
      SearchParams ps = params;
      if (ps.tuple_size < 1) {
        int cells = 0;
        for (const auto& nf : nfs) cells += nf.m() * nf.n();
        ps.tuple_size = std::min(12, 2 * cells);
      }
      auto h = HomogeneousFunction::builtin_cp(static_cast<int>(fs.size()), p);
      rep.lhs =
          pnorm_of_evaluable(space, calculus_apply(h, std::move(evals)), p, ps)
              .value;
    }
  }
  rep.pass = rep.lhs <= rep.rhs + tol;
  return rep;
}

bool check_increasing(const HomogeneousFunction& h, int samples,
                      std::uint64_t seed) {
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Vec lo = rng.uniform_vec(h.arity, 0.0, 1.0);
    Vec hi = lo;
    for (int i = 0; i < h.arity; ++i) hi[i] += rng.uniform(0.0, 1.0);
    if (h(lo) > h(hi) + 1e-12) return false;
  }
  return true;
}

bool spot_check_homogeneous(const HomogeneousFunction& h, int samples,
                            std::uint64_t seed) {
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Vec u = rng.uniform_vec(h.arity, -1.0, 1.0);
    double t = rng.uniform(0.0, 2.0);
    if (std::abs(h(scaled(u, t)) - t * h(u)) > 1e-12) return false;
  }
  return true;
}

bool scalar_convexity_check(const ConvexityType& ct, int samples,
                            std::uint64_t seed) {
  Rng rng(seed);
  for (const auto& impl : ct.implications) {
    for (int s = 0; s < samples; ++s) {
      Vec x = rng.uniform_vec(impl.arity, -1.0, 1.0);
      bool admitted = true;
      for (const auto& a : impl.antecedents) {
        if (a(x) > 1e-12) {
          admitted = false;
          break;
        }
      }
      if (!admitted) continue;
      Vec ax(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) ax[i] = std::abs(x[i]);
      for (const auto& [c1, c2] : impl.consequents) {
        if (std::abs(c1(x)) > c2(ax) + 1e-9) return false;
      }
    }
  }
  return true;
}

}  // namespace fbl
