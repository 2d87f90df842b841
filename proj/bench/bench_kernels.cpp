// Serial references against the OpenMP kernels.
#include <omp.h>

#include <random>

#include <benchmark/benchmark.h>

#include "dispel/nn/train.hpp"
#include "dispel/sweep/sweep.hpp"

using namespace dispel;

namespace {

nn::Batch random_batch(int rows, int width) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  nn::Batch b;
  b.n_in = width;
  for (int i = 0; i < rows * width; ++i) b.xs.push_back(u(rng));
  for (int i = 0; i < rows; ++i) b.ys.push_back(0.5 + 0.25 * u(rng));
  return b;
}

void BM_gradient(benchmark::State& st) {
  const nn::MLP m = nn::build_mlp({41, 40, 20, 1}, nn::Activation::softplus, 3);
  const nn::Batch b = random_batch(static_cast<int>(st.range(0)), 41);
  std::vector<double> g;
  for (auto _ : st) benchmark::DoNotOptimize(nn::loss_and_gradient(m, b, 1e-4, &g));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_gradient_serial(benchmark::State& st) {
  const nn::MLP m = nn::build_mlp({41, 40, 20, 1}, nn::Activation::softplus, 3);
  const nn::Batch b = random_batch(static_cast<int>(st.range(0)), 41);
  std::vector<double> g;
  for (auto _ : st) benchmark::DoNotOptimize(nn::loss_and_gradient_serial(m, b, 1e-4, &g));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void characterize(benchmark::State& st, bool parallel) {
  sweep::SweepSetup s;
  s.stack = interconnect::default_stack();
  const device::VSParams n = device::tune_vt(sweep::mos2_nfet(), 1.0, 0.6);
  const device::VSParams p = device::tune_vt(sweep::bp_pfet(), 1.0, 0.6);
  cells::LibraryOptions opt;
  opt.parallel = parallel;
  for (auto _ : st) benchmark::DoNotOptimize(cells::build_library(s.dims, s.stack, n, p, 0.6, opt).cells.size());
}
void BM_characterize(benchmark::State& st) { characterize(st, true); }
void BM_characterize_serial(benchmark::State& st) { characterize(st, false); }

// V_DD points of one sweep; threads = 1 is the serial reference.
void BM_sweep_vdd(benchmark::State& st) {
  sweep::SweepConfig cfg;
  cfg.vdd = {0.5, 0.6, 0.7, 0.8};
  cfg.f_coarse = {1, 2, 3, 4};
  cfg.f_fine_half = 2;
  cfg.n_gates = 300;
  cfg.depth = 10;
  cfg.place_moves = 100;
  const sweep::SweepSetup s = sweep::default_setup(cfg);
  const auto libs = sweep::build_libraries(cfg, s);
  const int threads = st.range(0) ? static_cast<int>(st.range(0)) : omp_get_max_threads();
  const int keep = omp_get_max_threads();
  omp_set_num_threads(threads);
  for (auto _ : st) benchmark::DoNotOptimize(sweep::ef_sweep(cfg, s, libs).records.size());
  omp_set_num_threads(keep);
  st.counters["threads"] = threads;
}

}  // namespace

BENCHMARK(BM_gradient)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_gradient_serial)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_characterize)->Unit(benchmark::kSecond)->Iterations(1);
BENCHMARK(BM_characterize_serial)->Unit(benchmark::kSecond)->Iterations(1);
BENCHMARK(BM_sweep_vdd)->Arg(1)->Arg(0)->Unit(benchmark::kSecond)->Iterations(1);

BENCHMARK_MAIN();
