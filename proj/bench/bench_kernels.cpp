#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "wick/lattice.hpp"
#include "wick/presets.hpp"
#include "wick/semigroup.hpp"

using namespace wick;

namespace {

LatticeOperator curved_op(int n, double theta) {
  const auto adm = curved_1p1(2 * kPi, 0.3, 0.2);
  return assemble_delta_theta(TorusGrid({n, n}, adm.periods), adm, theta);
}

CVector random_state(int n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  CVector v(n);
  for (auto& x : v) x = Complex(nd(rng), nd(rng));
  return v;
}

void BM_apply_serial(benchmark::State& st) {
  const auto op = curved_op(static_cast<int>(st.range(0)), kPi / 4);
  const CVector x = random_state(op.size());
  CVector y(op.size());
  for (auto _ : st) {
    apply_serial(op.matrix, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  st.SetItemsProcessed(st.iterations() * op.matrix.nonZeros());
}

void BM_apply_parallel(benchmark::State& st) {
  const auto op = curved_op(static_cast<int>(st.range(0)), kPi / 4);
  const CVector x = random_state(op.size());
  CVector y(op.size());
  for (auto _ : st) {
    apply(op.matrix, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  st.SetItemsProcessed(st.iterations() * op.matrix.nonZeros());
}

// range(1) = thread count, 0 for all; 1 is the serial reference
void BM_contour(benchmark::State& st) {
  const auto op = curved_op(static_cast<int>(st.range(0)), kPi / 4);
  const CVector psi = random_state(op.size());
  const int saved = omp_get_max_threads();
  omp_set_num_threads(st.range(1) > 0 ? static_cast<int>(st.range(1)) : omp_get_num_procs());
  for (auto _ : st) benchmark::DoNotOptimize(evolve_contour(op, 0.05, psi, 32).state.data());
  omp_set_num_threads(saved);
}

void BM_expm_action(benchmark::State& st) {
  const auto op = curved_op(static_cast<int>(st.range(0)), 0.1);
  const CVector psi = random_state(op.size());
  for (auto _ : st) benchmark::DoNotOptimize(expm_action(op, 0.25, psi).data());
}

}  // namespace

BENCHMARK(BM_apply_serial)->Arg(64)->Arg(256);
BENCHMARK(BM_apply_parallel)->Arg(64)->Arg(256);
BENCHMARK(BM_contour)->Args({48, 1})->Args({48, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_expm_action)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
