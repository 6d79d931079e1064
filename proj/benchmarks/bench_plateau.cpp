#include <benchmark/benchmark.h>

#include "plateau/admm.hpp"
#include "plateau/fespace.hpp"
#include "plateau/regions.hpp"

using namespace plateau;

namespace {

TetMesh sphere_box(int n) { return build_box_mesh({n, n, n}, Vec3(2, 2, 2)); }

void BM_BoxMesh(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sphere_box(n));
  state.SetComplexityN(n * n * n);
}
BENCHMARK(BM_BoxMesh)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_AssembleSystem(benchmark::State& state) {
  const TetMesh m = sphere_box(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    SparseMatrix a = assemble_curlcurl(m) + assemble_mass_ned(m);
    benchmark::DoNotOptimize(a.nonZeros());
  }
  state.counters["edges"] = static_cast<double>(m.num_edges());
}
BENCHMARK(BM_AssembleSystem)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Factorize(benchmark::State& state) {
  const TetMesh m = sphere_box(static_cast<int>(state.range(0)));
  const SparseMatrix a = assemble_curlcurl(m) + assemble_mass_ned(m);
  for (auto _ : state) benchmark::DoNotOptimize(Factorization::factorize(a).size());
  state.counters["unknowns"] = static_cast<double>(a.rows());
}
BENCHMARK(BM_Factorize)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const TetMesh m = sphere_box(static_cast<int>(state.range(0)));
  const Shape s = Shape::donut();
  for (auto _ : state) benchmark::DoNotOptimize(classify_cells(m, s, {}).region.data());
}
BENCHMARK(BM_Classify)->Arg(16)->Unit(benchmark::kMillisecond);

// Cost of one ADMM iteration (u-step, both proxes, dual updates) on a shared factorization.
void BM_AdmmIteration(benchmark::State& state) {
  const TetMesh m = sphere_box(static_cast<int>(state.range(0)));
  const Shape s = Shape::sphere(1.0);
  AdmmParams p;
  p.beta = 0.5;
  const RegionLabels l = classify_cells(m, s, p.region_params());
  const AdmmOperators ops = build_operators(m, p.gamma_m, p.gamma_c, p.mass);
  const int iterations = 20;
  p.iterations = iterations;
  for (auto _ : state) benchmark::DoNotOptimize(admm_run(m, l, s, p, &ops).energy);
  state.SetItemsProcessed(state.iterations() * iterations);
}
BENCHMARK(BM_AdmmIteration)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Prox(benchmark::State& state) {
  Vec3 pbar(0.3, -1.2, 0.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prox_weighted_l1(pbar, 0.7, 1.3));
    pbar[0] += 1e-12;
  }
}
BENCHMARK(BM_Prox);

}  // namespace
BENCHMARK_MAIN();
