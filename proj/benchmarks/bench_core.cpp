#include <benchmark/benchmark.h>

#include "hfmri/conv.hpp"
#include "hfmri/fft.hpp"
#include "hfmri/frames.hpp"
#include "hfmri/hankel.hpp"
#include "hfmri/phantom.hpp"
#include "hfmri/rng.hpp"
#include "hfmri/sampling.hpp"
#include "hfmri/solver.hpp"
#include "hfmri/weights.hpp"

using namespace hfmri;

namespace {

ComplexImage bench_image(int n) {
  Rng rng(1);
  ComplexImage img(make_grid(n));
  for (Complex& z : img.values()) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return img;
}

void BM_Dft(benchmark::State& state) {
  const ComplexImage u = bench_image(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dft(u));
}
BENCHMARK(BM_Dft)->Arg(64)->Arg(128)->Arg(256);

void BM_ConvPeriodic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexImage u = bench_image(n);
  Rng rng(2);
  Filter a(make_support(15, 15));
  for (Complex& z : a.taps) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  for (auto _ : state) benchmark::DoNotOptimize(conv_periodic(a, u, ConvMode::correlate));
}
BENCHMARK(BM_ConvPeriodic)->Arg(128)->Arg(256);

void BM_AnalyzeSynthesize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  Rng rng(3);
  const ComplexImage v = bench_image(n);
  const GradientPair w = gradient_weight(v, WeightSpec{1.0});
  const HankelMatrix h = hankel_explicit(w, make_support(k, k), HankelBoundary::interior);
  const FilterBank bank = filters_from_svd(h).bank;
  for (auto _ : state) {
    CoefficientSet c = analyze(bank, w);
    benchmark::DoNotOptimize(synthesize(bank, c));
  }
}
BENCHMARK(BM_AnalyzeSynthesize)->Args({64, 8})->Args({128, 15});

void BM_HankelGram(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  Rng rng(4);
  const ComplexImage v = bench_image(n);
  const GradientPair w = gradient_weight(v, WeightSpec{1.0});
  const HankelMatrix h = hankel_explicit(w, make_support(k, k), HankelBoundary::interior);
  const FilterBank bank = filters_from_svd(h).bank;
  const CoefficientSet c = analyze(bank, w);
  for (auto _ : state) benchmark::DoNotOptimize(hankel_gram(w, c.coeffs, bank.support));
}
BENCHMARK(BM_HankelGram)->Args({64, 8})->Args({128, 15});

void BM_SolverIteration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexImage full = ellipse_kspace(default_phantom(), make_grid(n));
  const SamplingMask mask = vardensity_mask(make_grid(n), 0.2, 2.0, n / 25 + 1, 5);
  const ComplexImage data = add_noise_to_snr(zero_fill(full, mask), mask, 25.0, 6).data;
  SolverParams p;
  p.patch_size = n >= 128 ? 15 : 8;
  p.init_rank = static_cast<int>(0.8 * p.patch_size * p.patch_size);
  SolverState s = init_state(data, mask, p);
  for (auto _ : state) step(s, data, mask, p);
}
BENCHMARK(BM_SolverIteration)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
