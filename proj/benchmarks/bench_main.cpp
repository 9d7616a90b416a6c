#include <memory>

#include <benchmark/benchmark.h>

#include "cbdwr/adapt.hpp"
#include "cbdwr/sparse_lu.hpp"

using namespace cbdwr;

namespace {

std::shared_ptr<const AdaptiveMesh> uniform_mesh(int times) {
  AdaptiveMesh mesh = initial_mesh();
  for (int i = 0; i < times; ++i) mesh = refine_uniform(mesh);
  return std::make_shared<const AdaptiveMesh>(std::move(mesh));
}

// A nontrivial state: the interpolated bump (1-x^2)(1-y^2).
DiscreteField bump(const SpacePtr& space) {
  DiscreteField u = zero_field(space);
  const auto& coords = space->dof_coords();
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const Point p = coords[i];
    u.values[static_cast<Eigen::Index>(i)] = (1.0 - p.x * p.x) * (1.0 - p.y * p.y);
  }
  space->constraints().distribute(u.values);
  return u;
}

void BM_Residual(benchmark::State& state) {
  const SpacePtr space = build_space(uniform_mesh(static_cast<int>(state.range(0))), static_cast<int>(state.range(1)));
  const DiscreteField u = bump(space);
  const ModelParams params;
  for (auto _ : state) benchmark::DoNotOptimize(residual(u, params));
  state.counters["dofs"] = static_cast<double>(space->n_dofs());
}
BENCHMARK(BM_Residual)->Args({5, 1})->Args({7, 1})->Args({5, 2})->Unit(benchmark::kMillisecond);

void BM_Jacobian(benchmark::State& state) {
  const SpacePtr space = build_space(uniform_mesh(static_cast<int>(state.range(0))), static_cast<int>(state.range(1)));
  const DiscreteField u = bump(space);
  const ModelParams params;
  for (auto _ : state) benchmark::DoNotOptimize(jacobian(u, params));
  state.counters["dofs"] = static_cast<double>(space->n_dofs());
}
BENCHMARK(BM_Jacobian)->Args({5, 1})->Args({7, 1})->Args({5, 2})->Unit(benchmark::kMillisecond);

void BM_Factorize(benchmark::State& state) {
  const SpacePtr space = build_space(uniform_mesh(static_cast<int>(state.range(0))), static_cast<int>(state.range(1)));
  const SparseMatrix a = jacobian(bump(space), ModelParams{});
  for (auto _ : state) {
    SparseLu lu;
    lu.factorize(a);
    benchmark::ClobberMemory();
  }
  state.counters["dofs"] = static_cast<double>(space->n_dofs());
}
BENCHMARK(BM_Factorize)->Args({6, 1})->Args({8, 1})->Args({6, 2})->Unit(benchmark::kMillisecond);

void BM_AdaptiveLoop(benchmark::State& state) {
  AdaptConfig cfg;
  cfg.max_steps = static_cast<int>(state.range(0));
  cfg.max_dofs = 1000000;
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg, ModelParams{}));
}
BENCHMARK(BM_AdaptiveLoop)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
