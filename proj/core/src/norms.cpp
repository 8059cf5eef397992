#include "freelat/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "freelat/linprog.hpp"

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

void require_finite_p(double p, const char* who) {
  if (!(p >= 1.0) || p == kPInf)
    throw std::invalid_argument(std::string(who) +
                                ": p must be finite and >= 1");
}

double max_entry(const NormalForm& nf) {
  double s = 0.0;
  for (const auto& row : nf.rows)
    for (const auto& v : row) s = std::max(s, max_abs(v));
  return s;
}

// Engines divide the input by its largest coefficient and multiply the
// result back. This pins down the floating-point path: scaling the input by
// a power of two then scales the output exactly, and every other scaling is
// exact to roundoff.
NormalForm divided(const NormalForm& nf, double s) {
  NormalForm out = nf;
  for (auto& row : out.rows)
    for (auto& v : row)
      for (double& t : v) t /= s;
  return out;
}

void check_nf(const PreorderedSpace& space, const NormalForm& nf,
              const char* who) {
  if (nf.m() < 1 || nf.n() < 1)
    throw std::invalid_argument(std::string(who) + ": empty normal form");
  if (nf.dim != space.dim())
    throw std::invalid_argument(std::string(who) +
                                ": normal form dimension differs from space");
}

double constraint_raw(const std::vector<Vec>& ball_verts,
                      const std::vector<Vec>& tuple, double p) {
  double worst = 0.0;
  for (const auto& v : ball_verts) {
    double s = 0.0;
    for (const auto& f : tuple) s += pow_p(dot(f, v), p);
    worst = std::max(worst, s);
  }
  return root_p(worst, p);
}

// Deterministic endgame ascent on cone coordinates: annealed single-weight
// moves plus pairwise weight transfers. Transfers follow ridges of the
// rescaled objective, where any single-coordinate move raises the adjoint
// constraint as fast as the value and stalls.
void polish_weights(const std::function<double(const Vec&)>& score, int N,
                    int G, double start_delta, Vec& w, double& cur) {
  const int W = N * G;
  // Few sweeps per level: once a level stops paying, halving the step and
  // re-sweeping beats chasing O(delta^2) residues at the current one.
  for (double delta = start_delta; delta >= 1e-9; delta *= 0.5) {
    for (int sweep = 0; sweep < 3; ++sweep) {
      bool improved = false;
      for (int k = 0; k < W; ++k) {
        for (double dir : {+1.0, -1.0}) {
          const double old = w[k];
          const double next = std::max(0.0, old + dir * delta);
          if (next == old) continue;
          w[k] = next;
          const double jv = score(w);
          if (jv > cur) {
            cur = jv;
            improved = true;
          } else {
            w[k] = old;
          }
        }
      }
      for (int k = 0; k < W; ++k) {
        for (int l = 0; l < W; ++l) {
          if (l == k || w[l] == 0.0) continue;
          const double old_k = w[k];
          const double old_l = w[l];
          w[k] = old_k + delta;
          w[l] = std::max(0.0, old_l - delta);
          const double jv = score(w);
          if (jv > cur) {
            cur = jv;
            improved = true;
          } else {
            w[k] = old_k;
            w[l] = old_l;
          }
        }
      }
      if (!improved) break;
    }
  }
}

// Maximize t subject to t <= <x_l, x*> for each inner term and x* in B+.
// Variables: x* (free, dim d) then t (free).
double row_max_lp(const PreorderedSpace& space, const std::vector<Vec>& row,
                  Vec* witness) {
  const int d = space.dim();
  LinearProgram lp(d + 1);
  lp.objective[d] = 1.0;
  for (const auto& h : space.positive_dual().halfspaces) {
    Vec c(d + 1, 0.0);
    for (int j = 0; j < d; ++j) c[j] = h.normal[j];
    lp.add_le(std::move(c), h.offset);
  }
  for (const auto& x : row) {
    Vec c(d + 1, 0.0);
    for (int j = 0; j < d; ++j) c[j] = -x[j];
    c[d] = 1.0;
    lp.add_le(std::move(c), 0.0);
  }
  LpSolution sol = maximize(lp);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error(
        "sup-norm row LP did not reach an optimum (status " +
        std::to_string(static_cast<int>(sol.status)) + ")");
  if (witness) witness->assign(sol.point.begin(), sol.point.begin() + d);
  return sol.value;
}

struct SearchResult {
  double value = 0.0;
  Vec weights;  // N x G cone coordinates of the best tuple found
};

// Multi-start random ascent over nonnegative cone coordinates. The
// objective J(w) = value(tuple(w)) / adjoint_constraint(tuple(w)) is
// invariant under rescaling w, so the feasibility constraint never has to
// be enforced during the walk.
SearchResult run_search(const PreorderedSpace& space, double p,
                        const std::function<double(const Vec&)>& f, int N,
                        const SearchParams& params) {
  if (params.restarts < 1)
    throw std::invalid_argument("search needs at least one restart");
  const auto& verts = space.positive_dual().vertices;
  const auto& ball = space.ball_vertices();
  const int d = space.dim();
  const int G = static_cast<int>(verts.size());
  const int W = N * G;

  std::vector<Vec> tuple(N, Vec(d, 0.0));
  auto build_tuple = [&](const Vec& w) {
    for (int i = 0; i < N; ++i) {
      Vec& x = tuple[i];
      std::fill(x.begin(), x.end(), 0.0);
      for (int g = 0; g < G; ++g) add_scaled(x, w[i * G + g], verts[g]);
    }
  };
  auto objective = [&]() {
    double s = 0.0;
    for (const auto& x : tuple) s += pow_p(f(x), p);
    return root_p(s, p);
  };
  auto score = [&](const Vec& w) {
    build_tuple(w);
    double c = constraint_raw(ball, tuple, p);
    if (c <= 1e-300) return 0.0;
    return objective() / c;
  };

  SearchResult best;
  best.value = -1.0;
  Vec w(W), cand(W);
  for (int r = 0; r < params.restarts; ++r) {
    Rng rng = Rng::substream(params.seed, static_cast<std::uint64_t>(r));
    for (double& t : w) t = rng.next_double();
    double cur = score(w);
    double step = params.step;
    int rejects = 0;
    for (int s = 0; s < params.steps; ++s) {
      for (int k = 0; k < W; ++k)
        cand[k] = std::max(0.0, w[k] + step * rng.uniform(-1.0, 1.0));
      double jv = score(cand);
      if (jv > cur) {
        w.swap(cand);
        cur = jv;
        rejects = 0;
      } else if (++rejects >= 20) {
        step *= 0.5;
        rejects = 0;
        if (step < 1e-10) break;
      }
    }
    if (cur > best.value) {
      best.value = cur;
      best.weights = w;
    }
  }
  if (!best.weights.empty())
    polish_weights(score, N, G, params.step, best.weights, best.value);
  return best;
}

// Turns the best cone coordinates into a feasible tuple and the value it
// certifies.
NormEstimate finalize_tuple(const PreorderedSpace& space, double p,
                            const std::function<double(const Vec&)>& f, int N,
                            const Vec& weights, const SearchParams& params) {
  const auto& verts = space.positive_dual().vertices;
  const int d = space.dim();
  const int G = static_cast<int>(verts.size());

  NormEstimate est;
  est.exact = false;
  est.restarts_used = params.restarts;
  est.seed = params.seed;
  est.certificate.p = p;

  std::vector<Vec> tuple(N, Vec(d, 0.0));
  for (int i = 0; i < N; ++i)
    for (int g = 0; g < G; ++g)
      add_scaled(tuple[i], weights[i * G + g], verts[g]);
  double c = constraint_raw(space.ball_vertices(), tuple, p);
  if (c <= 1e-12) {
    est.value = 0.0;
    est.certificate.functionals.assign(N, DualFunctional{zero_vec(d)});
    return est;
  }
  double s = 0.0;
  for (auto& x : tuple) {
    for (double& t : x) t /= c;
    s += pow_p(f(x), p);
  }
  est.value = root_p(s, p);
  est.certificate.functionals.reserve(N);
  for (auto& x : tuple)
    est.certificate.functionals.push_back(DualFunctional{std::move(x)});
  return est;
}

NormEstimate zero_estimate(double p, int N, int d, bool exact,
                           const SearchParams& params) {
  NormEstimate est;
  est.value = 0.0;
  est.exact = exact;
  est.restarts_used = params.restarts;
  est.seed = params.seed;
  est.certificate.p = p;
  est.certificate.functionals.assign(std::max(N, 1),
                                     DualFunctional{zero_vec(d)});
  return est;
}

}  // namespace

bool FeasibleTuple::feasible(const PreorderedSpace& space, double tol) const {
  for (const auto& f : functionals) {
    if (!f.positive(space, tol)) return false;
  }
  if (p == kPInf) {
    for (const auto& f : functionals) {
      if (!f.in_dual_ball(space, tol)) return false;
    }
    return true;
  }
  return adjoint_constraint(space, functionals, p) <= 1.0 + tol;
}

NormEstimate norm_inf_exact(const PreorderedSpace& space,
                            const NormalForm& nf) {
  check_nf(space, nf, "norm_inf_exact");
  const int d = space.dim();
  NormEstimate est;
  est.exact = true;
  est.certificate.p = kPInf;

  double s = max_entry(nf);
  if (s == 0.0) {
    est.certificate.functionals.assign(1, DualFunctional{zero_vec(d)});
    return est;
  }
  NormalForm core = divided(nf, s);

  double best = -1.0;
  Vec best_pt(d, 0.0);
  auto scan = [&](const NormalForm& form) {
    Vec pt;
    for (const auto& row : form.rows) {
      double v = row_max_lp(space, row, &pt);
      if (v > best) {
        best = v;
        best_pt = pt;
      }
    }
  };
  scan(core);
  scan(negate_normal(core));

  est.value = s * std::max(best, 0.0);
  est.certificate.functionals.assign(1, DualFunctional{std::move(best_pt)});
  return est;
}

double adjoint_constraint(const PreorderedSpace& space,
                          const std::vector<DualFunctional>& tuple, double p) {
  require_finite_p(p, "adjoint_constraint");
  std::vector<Vec> raw;
  raw.reserve(tuple.size());
  for (const auto& f : tuple) {
    if (static_cast<int>(f.coords.size()) != space.dim())
      throw std::invalid_argument(
          "adjoint_constraint: functional has wrong dimension");
    raw.push_back(f.coords);
  }
  return constraint_raw(space.ball_vertices(), raw, p);
}

NormEstimate norm_p_lower(const PreorderedSpace& space, const NormalForm& nf,
                          double p, const SearchParams& params) {
  require_finite_p(p, "norm_p_lower");
  check_nf(space, nf, "norm_p_lower");
  const int N = params.tuple_size > 0 ? params.tuple_size : 2 * nf.m() * nf.n();
  if (N < 1) throw std::invalid_argument("norm_p_lower: tuple size must be >= 1");

  double s = max_entry(nf);
  if (s == 0.0) return zero_estimate(p, N, space.dim(), false, params);
  NormalForm core = divided(nf, s);
  auto f = [&core](const Vec& x) { return evaluate(core, x); };

  SearchResult best = run_search(space, p, f, N, params);
  NormEstimate est = finalize_tuple(space, p, f, N, best.weights, params);
  est.value *= s;
  return est;
}

NormEstimate pnorm_of_evaluable(const PreorderedSpace& space,
                                const std::function<double(const Vec&)>& f,
                                double p, const SearchParams& params) {
  require_finite_p(p, "pnorm_of_evaluable");
  if (params.tuple_size < 1)
    throw std::invalid_argument(
        "pnorm_of_evaluable: params.tuple_size must be set");
  const int d = space.dim();

  // Positive homogeneity spot check; a function failing it has no p-norm in
  // this sense and the search below would be meaningless.
  Rng rng(params.seed ^ 0xA5C1E5ull);
  for (int i = 0; i < 32; ++i) {
    Vec x = rng.uniform_vec(d, -1.0, 1.0);
    double t = rng.uniform(0.0, 2.0);
    double lhs = f(scaled(x, t));
    double rhs = t * f(x);
    if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs)))
      throw std::invalid_argument(
          "pnorm_of_evaluable: function is not positively homogeneous");
  }

  SearchResult best = run_search(space, p, f, params.tuple_size, params);
  return finalize_tuple(space, p, f, params.tuple_size, best.weights, params);
}

NormEstimate norm_p_oracle(const PreorderedSpace& space, const NormalForm& nf,
                           double p, double grid_step, int tuple_size) {
  require_finite_p(p, "norm_p_oracle");
  check_nf(space, nf, "norm_p_oracle");
  if (!(grid_step > 0.0) || grid_step > 1.0)
    throw std::invalid_argument("norm_p_oracle: grid_step must be in (0, 1]");
  const int N = tuple_size > 0 ? tuple_size : 2 * nf.m() * nf.n();
  const int d = space.dim();
  const auto& verts = space.positive_dual().vertices;
  const auto& ball = space.ball_vertices();
  const int G = static_cast<int>(verts.size());
  const int R = std::max(1, static_cast<int>(std::llround(1.0 / grid_step)));

  SearchParams meta;  // carried only for the report fields
  meta.restarts = 0;
  meta.seed = 0;

  double s = max_entry(nf);
  if (s == 0.0) return zero_estimate(p, N, d, false, meta);
  NormalForm core = divided(nf, s);
  auto f = [&core](const Vec& x) { return evaluate(core, x); };

  double m_pts = 1.0;  // C(R+G-1, G-1)
  for (int i = 1; i <= G - 1; ++i) m_pts = m_pts * (R + i) / i;
  double n_tuples = 1.0;  // C(M+N-1, N)
  for (int i = 1; i <= N; ++i) n_tuples = n_tuples * (m_pts + i - 1) / i;
  if (m_pts > 2e5 || n_tuples > 2e6)
    throw std::runtime_error(
        "norm_p_oracle: grid would need " + std::to_string(n_tuples) +
        " tuples; use a coarser grid or a smaller tuple size");

  // Barycentric grid over B+ (compositions of R into G parts).
  std::vector<Vec> weights;   // length-G weights, entries k/R, sum 1
  std::vector<Vec> points;    // the corresponding dual points
  {
    std::vector<int> k(G, 0);
    Vec wrow(G, 0.0);
    auto emit = [&]() {
      for (int g = 0; g < G; ++g) wrow[g] = double(k[g]) / double(R);
      Vec pt(d, 0.0);
      for (int g = 0; g < G; ++g) add_scaled(pt, wrow[g], verts[g]);
      weights.push_back(wrow);
      points.push_back(std::move(pt));
    };
    // odometer over all nonnegative integer vectors summing to R
    auto rec = [&](auto&& self, int pos, int left) -> void {
      if (pos == G - 1) {
        k[pos] = left;
        emit();
        return;
      }
      for (int t = 0; t <= left; ++t) {
        k[pos] = t;
        self(self, pos + 1, left - t);
      }
    };
    rec(rec, 0, R);
  }
  const int M = static_cast<int>(points.size());

  // Per-point tables make each tuple O(N * |ball|) additions.
  const int V = static_cast<int>(ball.size());
  std::vector<double> fpow(M);
  std::vector<Vec> cpow(M, Vec(V, 0.0));
  for (int g = 0; g < M; ++g) {
    fpow[g] = pow_p(f(points[g]), p);
    for (int v = 0; v < V; ++v) cpow[g][v] = pow_p(dot(points[g], ball[v]), p);
  }

  // Exhaustive scan over multisets idx[0] <= ... <= idx[N-1], keeping the
  // best few tuples. Refining from several starts protects against the
  // coarse grid misranking the basin that holds the true maximum.
  constexpr std::size_t kStarts = 16;
  std::vector<std::pair<double, std::vector<int>>> top;  // ratio descending
  auto offer = [&](double ratio, const std::vector<int>& tuple_idx) {
    if (top.size() == kStarts && ratio <= top.back().first) return;
    auto pos = std::upper_bound(
        top.begin(), top.end(), ratio,
        [](double r, const std::pair<double, std::vector<int>>& e) {
          return r > e.first;
        });
    top.emplace(pos, ratio, tuple_idx);
    if (top.size() > kStarts) top.pop_back();
  };
  std::vector<int> idx(N, 0);
  Vec col(V, 0.0);
  for (;;) {
    double num = 0.0;
    std::fill(col.begin(), col.end(), 0.0);
    for (int i = 0; i < N; ++i) {
      num += fpow[idx[i]];
      const Vec& c = cpow[idx[i]];
      for (int v = 0; v < V; ++v) col[v] += c[v];
    }
    double den = *std::max_element(col.begin(), col.end());
    if (den > 1e-300) offer(num / den, idx);
    int i = N - 1;
    while (i >= 0 && idx[i] == M - 1) --i;
    if (i < 0) break;
    int v = ++idx[i];
    for (int j = i + 1; j < N; ++j) idx[j] = v;
  }

  std::vector<Vec> tuple(N, Vec(d, 0.0));
  auto score = [&](const Vec& wv) {
    for (int i = 0; i < N; ++i) {
      std::fill(tuple[i].begin(), tuple[i].end(), 0.0);
      for (int g = 0; g < G; ++g)
        add_scaled(tuple[i], wv[i * G + g], verts[g]);
    }
    double c = constraint_raw(ball, tuple, p);
    if (c <= 1e-300) return 0.0;
    double num = 0.0;
    for (const auto& x : tuple) num += pow_p(f(x), p);
    return root_p(num, p) / c;
  };
  Vec w(N * G, 0.0), best_w(N * G, 0.0);
  double best_val = -1.0;
  for (const auto& start : top) {
    for (int i = 0; i < N; ++i)
      for (int g = 0; g < G; ++g) w[i * G + g] = weights[start.second[i]][g];
    double cur = score(w);
    polish_weights(score, N, G, grid_step, w, cur);
    if (cur > best_val) {
      best_val = cur;
      best_w = w;
    }
  }

  NormEstimate est = finalize_tuple(space, p, f, N, best_w, meta);
  est.value *= s;
  return est;
}

double engine_norm(const PreorderedSpace& space, const NormEngine& engine,
                   const NormalForm& nf, int budget_factor) {
  if (engine.p == kPInf) return norm_inf_exact(space, nf).value;
  SearchParams ps = engine.params;
  ps.restarts *= std::max(budget_factor, 1);
  ps.tuple_size = 0;  // derive from the form
  return norm_p_lower(space, nf, engine.p, ps).value;
}

double norm_of_generator_positive(const PreorderedSpace& space, const Vec& x) {
  if (static_cast<int>(x.size()) != space.dim())
    throw std::invalid_argument(
        "norm_of_generator_positive: vector has wrong dimension");
  if (!cone_membership(space, x))
    throw std::invalid_argument(
        "norm_of_generator_positive: vector is not in the wedge");
  double s = max_abs(x);
  if (s == 0.0) return 0.0;
  const int d = space.dim();
  LinearProgram lp(d);
  for (int j = 0; j < d; ++j) lp.objective[j] = x[j] / s;
  for (const auto& h : space.positive_dual().halfspaces)
    lp.add_le(h.normal, h.offset);
  LpSolution sol = maximize(lp);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("norm_of_generator_positive: LP failed");
  return s * std::max(sol.value, 0.0);
}

}  // namespace fbl
