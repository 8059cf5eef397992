// Micro-benchmarks for the geometric kernels and both norm engines.
#include <benchmark/benchmark.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "freelat/expr.hpp"
#include "freelat/geometry.hpp"
#include "freelat/norms.hpp"
#include "freelat/rng.hpp"

namespace {

using namespace fbl;

PreorderedSpace square_space() {
  return PreorderedSpace(
      2, {{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}},
      {{1.0, 0.0}, {0.0, 1.0}});
}

NormalForm random_form(int m, int n, Rng& rng) {
  NormalForm nf;
  nf.dim = 2;
  for (int i = 0; i < m; ++i) {
    std::vector<Vec> row;
    for (int j = 0; j < n; ++j) row.push_back(rng.uniform_vec(2, -1.0, 1.0));
    nf.rows.push_back(std::move(row));
  }
  return nf;
}

// Vertex enumeration of the unit square cut by `k` random halfplanes.
void BM_EnumerateVertices(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  Rng rng(1);
  std::vector<Halfspace> sys = {{{1.0, 0.0}, 1.0},
                                {{-1.0, 0.0}, 1.0},
                                {{0.0, 1.0}, 1.0},
                                {{0.0, -1.0}, 1.0}};
  for (int i = 0; i < k; ++i) {
    const double angle = rng.uniform(0.0, 6.283185307179586);
    sys.push_back({{std::cos(angle), std::sin(angle)}, rng.uniform(0.3, 1.5)});
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_vertices(sys, 2));
}
BENCHMARK(BM_EnumerateVertices)->Arg(0)->Arg(4)->Arg(16)->Arg(64);

// Space construction: two polar duals plus the positive part.
void BM_SpaceConstruction(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(square_space());
}
BENCHMARK(BM_SpaceConstruction);

// Exact sup-norm: one LP per row of the form and of its negation, so the
// cost is driven by m + n^m.
void BM_NormInfExact(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  PreorderedSpace space = square_space();
  Rng rng(2);
  NormalForm nf = random_form(m, n, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(norm_inf_exact(space, nf));
}
BENCHMARK(BM_NormInfExact)
    ->Args({1, 1})
    ->Args({2, 2})
    ->Args({3, 3})
    ->Args({4, 4});

// Finite-p lower bound: cost scales linearly in the restart budget.
void BM_NormPLower(benchmark::State& state) {
  const int restarts = static_cast<int>(state.range(0));
  PreorderedSpace space = square_space();
  Rng rng(3);
  NormalForm nf = random_form(2, 2, rng);
  SearchParams params;
  params.restarts = restarts;
  for (auto _ : state)
    benchmark::DoNotOptimize(norm_p_lower(space, nf, 2.0, params));
}
BENCHMARK(BM_NormPLower)->Arg(8)->Arg(32)->Arg(128);

// Brute-force oracle at a fixed grid, for scale against the search.
void BM_NormPOracle(benchmark::State& state) {
  PreorderedSpace space = square_space();
  Rng rng(4);
  NormalForm nf = random_form(2, 2, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(norm_p_oracle(space, nf, 2.0, 0.125, 2));
}
BENCHMARK(BM_NormPOracle);

// Rewriting to sup-of-infs normal form; depth drives the expansion.
void BM_Normalize(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  Rng rng(5);
  std::vector<ExprPtr> exprs;
  while (exprs.size() < 64) {
    ExprPtr e = random_expression(2, depth, rng);
    try {
      normalize(*e);
    } catch (const std::runtime_error&) {
      continue;  // skip the rare cap-exceeding draw so every iteration works
    }
    exprs.push_back(std::move(e));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize(*exprs[i]));
    i = (i + 1) % exprs.size();
  }
}
BENCHMARK(BM_Normalize)->Arg(3)->Arg(4)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
