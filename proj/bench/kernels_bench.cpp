// Triple product D_X P D_Y: parallel kernels vs the serial reference vs the
// dense baseline, plus one gradient evaluation in each mode.

#include <random>

#include <benchmark/benchmark.h>

#include "fgc/experiments.hpp"
#include "fgc/fast_multiply.hpp"
#include "fgc/gradient.hpp"

namespace {

fgc::Matrix random_plan(std::size_t m, std::size_t n) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  fgc::Matrix p(m, n);
  for (double& x : p.values()) x = d(rng);
  return p;
}

fgc::Grid grid_1d(std::size_t n) { return fgc::UniformGrid1D(n, 1.0 / double(n - 1), 1); }

void BM_TripleSerial(benchmark::State& st) {
  const auto n = std::size_t(st.range(0));
  const auto p = random_plan(n, n);
  for (auto _ : st)
    benchmark::DoNotOptimize(fgc::triple_product(p, grid_1d(n), grid_1d(n), fgc::Execution::serial));
}

void BM_TripleParallel(benchmark::State& st) {
  const auto n = std::size_t(st.range(0));
  const auto p = random_plan(n, n);
  for (auto _ : st)
    benchmark::DoNotOptimize(fgc::triple_product(p, grid_1d(n), grid_1d(n), fgc::Execution::parallel));
}

void BM_TripleReference(benchmark::State& st) {
  const auto n = std::size_t(st.range(0));
  const auto p = random_plan(n, n);
  for (auto _ : st) benchmark::DoNotOptimize(fgc::reference::triple_product(p, grid_1d(n), grid_1d(n)));
}

void BM_TripleDense(benchmark::State& st) {
  const auto n = std::size_t(st.range(0));
  const auto p = random_plan(n, n);
  const auto d = fgc::dense_distance_matrix(grid_1d(n));
  for (auto _ : st) benchmark::DoNotOptimize(fgc::naive_triple_product(p, d, d));
}

void BM_Triple2D(benchmark::State& st) {
  const auto s = std::size_t(st.range(0));
  const fgc::Grid g = fgc::UniformGrid2D(s, 1.0 / double(s - 1), 1);
  const auto p = random_plan(s * s, s * s);
  for (auto _ : st)
    benchmark::DoNotOptimize(fgc::triple_product(p, g, g, fgc::Execution::parallel));
}

void gradient_bench(benchmark::State& st, fgc::GradientMode mode) {
  const auto n = std::size_t(st.range(0));
  const auto u = fgc::gen_random_measure_1d(n, 1), v = fgc::gen_random_measure_1d(n, 2);
  const auto ws = fgc::make_gw_workspace(u, v, mode);
  const auto p = fgc::independent_plan(u, v).values;
  for (auto _ : st) benchmark::DoNotOptimize(fgc::gradient(p, ws));
}

void BM_GradientFast(benchmark::State& st) { gradient_bench(st, fgc::GradientMode::fast); }
void BM_GradientNaive(benchmark::State& st) { gradient_bench(st, fgc::GradientMode::naive); }

}  // namespace

BENCHMARK(BM_TripleSerial)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TripleParallel)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TripleReference)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TripleDense)->RangeMultiplier(2)->Range(256, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Triple2D)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradientFast)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradientNaive)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
