#include <random>

#include <benchmark/benchmark.h>

#include "graphnls/evolve.hpp"
#include "graphnls/fixtures.hpp"
#include "graphnls/functional.hpp"
#include "graphnls/solve.hpp"

namespace {

using namespace graphnls;

GraphFunction smooth_state(double h) {
  const auto mesh = build_mesh(fixtures::example(1), h, 20.0);
  return project_mass(random_smooth_function(mesh, 1), 50.0);
}

void BM_Energy(benchmark::State& state) {
  const auto u = smooth_state(1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(energy(u, 4.0).total);
  state.SetItemsProcessed(state.iterations() * u.mesh().dofs());
}
BENCHMARK(BM_Energy)->Arg(50)->Arg(100)->Arg(200);

void BM_Gradient(benchmark::State& state) {
  const auto u = smooth_state(1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(grad_energy(u, 4.0).data());
  state.SetItemsProcessed(state.iterations() * u.mesh().dofs());
}
BENCHMARK(BM_Gradient)->Arg(50)->Arg(100)->Arg(200);

void BM_Rearrangement(benchmark::State& state) {
  const auto u = smooth_state(1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rearrangement(u).values().data());
}
BENCHMARK(BM_Rearrangement)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MinimizeOnEdge(benchmark::State& state) {
  SolveConfig cfg;
  cfg.h = 0.02;
  const auto g = fixtures::example(3);
  for (auto _ : state) benchmark::DoNotOptimize(minimize_on_edge(g, "e", 10.0, 4.0, cfg).energy.total);
}
BENCHMARK(BM_MinimizeOnEdge)->Unit(benchmark::kMillisecond);

void BM_CrankNicolson(benchmark::State& state) {
  const auto mesh = build_mesh(fixtures::example(3), 0.02, 20.0);
  const auto u0 = to_complex(project_mass(random_smooth_function(mesh, 2), 10.0));
  EvolveOptions o;
  o.final_time = 0.1;
  o.dt = 1e-3;
  o.stride = 100;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(u0, 4.0, o).mass_drift);
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_CrankNicolson)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
