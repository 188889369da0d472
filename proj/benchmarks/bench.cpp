// Microbenchmarks for the hot paths: dense eigensolves, boundary-correction
// series assembly, heat-kernel tables, commutator construction, and the
// modified Bessel evaluation underlying everything heat-related.
#include <benchmark/benchmark.h>

#include "fraclat/fractional.hpp"
#include "fraclat/heat.hpp"
#include "fraclat/lattice.hpp"
#include "fraclat/mourre.hpp"
#include "fraclat/spectral.hpp"

using namespace fraclat;

namespace {

void BM_eigensystem(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const Mat H = build_laplacian(make_box(BoxKind::half, {L}));
  for (auto _ : state) {
    EigenSystem es = eigensystem(H);
    benchmark::DoNotOptimize(es.evals);
  }
  state.SetComplexityN(L);
}
BENCHMARK(BM_eigensystem)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void BM_k_series(benchmark::State& state) {
  const int h_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    BoundaryCorrection K = k_series(4 * h_max, 0.5, h_max);
    benchmark::DoNotOptimize(K.matrix);
  }
}
BENCHMARK(BM_k_series)->Arg(8)->Arg(16)->Arg(32);

void BM_d_h_factorized(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0));
  for (auto _ : state) {
    IMat D = d_h(4 * h, h, DhMethod::factorized);
    benchmark::DoNotOptimize(D);
  }
}
BENCHMARK(BM_d_h_factorized)->Arg(6)->Arg(12)->Arg(24);

void BM_d_h_bruteforce(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0));
  for (auto _ : state) {
    IMat D = d_h(4 * h, h, DhMethod::bruteforce);
    benchmark::DoNotOptimize(D);
  }
}
BENCHMARK(BM_d_h_bruteforce)->Arg(6)->Arg(12);

void BM_kernel_table(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) {
    KernelTable tab = kernel_table(t, 120);
    benchmark::DoNotOptimize(tab.values);
  }
}
BENCHMARK(BM_kernel_table)->Arg(1)->Arg(8)->Arg(24);

void BM_bessel_series(benchmark::State& state) {
  // series branch (x < 50)
  double acc = 0.0;
  for (auto _ : state) {
    for (int nu = 0; nu <= 40; ++nu) acc += bessel_i(nu, 30.0);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_bessel_series);

void BM_bessel_miller(benchmark::State& state) {
  // backward-recurrence branch (x >= 50)
  double acc = 0.0;
  for (auto _ : state) {
    for (int nu = 0; nu <= 40; ++nu) acc += bessel_i_scaled(nu, 200.0);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_bessel_miller);

void BM_commutator(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const LatticeBox box = make_box(BoxKind::open_window, {L});
  const Mat H = build_laplacian(box);
  const ConjugateOp A = build_conjugate(box, {1});
  for (auto _ : state) {
    Mat C = form_commutator(H, A, 1);
    benchmark::DoNotOptimize(C);
  }
}
BENCHMARK(BM_commutator)->Arg(64)->Arg(128)->Arg(256);

void BM_frac_power_circulant(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) {
    PowerResult pr = frac_power_1d(L, BoxKind::periodic, 0.5,
                                   PowerMethod::circulant_symbol);
    benchmark::DoNotOptimize(pr.op);
  }
}
BENCHMARK(BM_frac_power_circulant)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
