#include <benchmark/benchmark.h>

#include <random>

#include "foliagraph/analyze.hpp"
#include "foliagraph/closing.hpp"
#include "foliagraph/eulerian.hpp"
#include "foliagraph/main_graph.hpp"
#include "foliagraph/sample.hpp"
#include "foliagraph/wedge.hpp"
#include "support.hpp"

using namespace foliagraph;

static GraphicalConfiguration make_tree(int vertices) {
  std::mt19937 rng(42);
  return testsupport::random_config(rng, {.max_vertices = vertices, .tree = true});
}

static void BM_SolveGlobal(benchmark::State& state) {
  auto config = make_tree(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_global(config));
}
BENCHMARK(BM_SolveGlobal)->Arg(4)->Arg(8)->Arg(16);

// one vertex, n open edges, cycle micrograph: full 2^n orientation sweep
static GraphicalConfiguration cycle_config(int n) {
  GraphicalConfiguration config;
  config.vertices.push_back({"v", false});
  for (int i = 0; i < n; ++i)
    config.edges.push_back({"L" + std::to_string(i), {vertex_end("v"), open_end()}});
  auto& micros = config.micrographs["v"];
  for (int i = 0; i < n; ++i)
    micros.push_back({"s" + std::to_string(i),
                      {"L" + std::to_string(i), "L" + std::to_string((i + 1) % n)}});
  return config;
}

static void BM_BruteForce(benchmark::State& state) {
  auto config = cycle_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_global(config));
}
BENCHMARK(BM_BruteForce)->Arg(6)->Arg(10);

static void BM_Betti(benchmark::State& state) {
  auto config = make_tree(12);
  for (auto _ : state) benchmark::DoNotOptimize(betti1(build_main_graph(config)));
}
BENCHMARK(BM_Betti);

static void BM_ParseExpr(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(parse_expr("piecewise(rho<0.5, 0, 4*(rho-0.5)^2*(rho-1))"));
}
BENCHMARK(BM_ParseExpr);

static void BM_WedgeResidual(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  auto form = sample_builtin("winding-cylinder", GridSpec{3, {-2, -2, -2}, {2, 2, 2}, {n, n, n}});
  for (auto _ : state) benchmark::DoNotOptimize(wedge_residual(form));
  state.SetItemsProcessed(state.iterations() * form.spec.node_count());
}
BENCHMARK(BM_WedgeResidual)->Arg(32)->Arg(64);

static void BM_ClosingMultiplier(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  auto form = sample_builtin("exact-ey", GridSpec{2, {-1, -1, 0}, {1, 1, 0}, {n, n, 1}});
  for (auto _ : state) benchmark::DoNotOptimize(closing_multiplier(form));
}
BENCHMARK(BM_ClosingMultiplier)->Arg(65)->Arg(129);

static void BM_TraceLeaf(benchmark::State& state) {
  auto form = sample_builtin("branch3", GridSpec{2, {-2, -2, 0}, {2, 2, 0}, {129, 129, 1}});
  for (auto _ : state) benchmark::DoNotOptimize(trace_leaf(form, {1.0, 0.5}));
}
BENCHMARK(BM_TraceLeaf);

static void BM_AnalyzeBranch2(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  auto form = sample_builtin("branch2", GridSpec{2, {-2, -1, 0}, {2, 1, 0}, {2 * n + 1, n + 1, 1}});
  for (auto _ : state) benchmark::DoNotOptimize(analyze(form));
}
BENCHMARK(BM_AnalyzeBranch2)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
