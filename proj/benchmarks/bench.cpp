#include <benchmark/benchmark.h>

#include <random>

#include "compgame/dynamics.hpp"
#include "compgame/equilibrium.hpp"
#include "compgame/simplex.hpp"
#include "compgame/spec_io.hpp"

using namespace cg;

static void BM_ProjectSimplex(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(n);
  for (Eigen::Index p = 0; p < n; ++p) v[p] = gauss(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_simplex(v));
  }
}
BENCHMARK(BM_ProjectSimplex)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

static void BM_TangentConeProjection(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SimplexPoint x = sample_simplex(n, rng);
  Vec v(n);
  for (Eigen::Index p = 0; p < n; ++p) v[p] = gauss(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_tangent_cone(x, v));
  }
}
BENCHMARK(BM_TangentConeProjection)->Arg(4)->Arg(16)->Arg(64);

static void BM_CompositeEvaluate(benchmark::State& state) {
  const auto spec = load_builtin("three-category");
  std::mt19937_64 rng(3);
  const StrategyProfile x = sample_profile(spec.game.block_sizes(), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(spec.game, x));
  }
}
BENCHMARK(BM_CompositeEvaluate);

static void BM_SmithField(benchmark::State& state) {
  const auto spec = load_builtin("affine-parallel");
  std::mt19937_64 rng(4);
  const StrategyProfile x = sample_profile(spec.game.block_sizes(), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(field(DynamicsKind::Smith, spec.game, x));
  }
}
BENCHMARK(BM_SmithField);

static void BM_Rk4Horizon(benchmark::State& state) {
  const auto spec = load_builtin("two-arc-population");
  const StrategyProfile x0 = spec.game.uniform_profile();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate(DynamicsKind::Smith, spec.game, x0, 0.01, 1.0));
  }
}
BENCHMARK(BM_Rk4Horizon);

static void BM_ViResidual(benchmark::State& state) {
  const auto spec = load_builtin("three-category");
  std::mt19937_64 rng(5);
  const StrategyProfile x = sample_profile(spec.game.block_sizes(), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vi_residual(spec.game, x));
  }
}
BENCHMARK(BM_ViResidual);

BENCHMARK_MAIN();
