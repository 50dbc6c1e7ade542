// Microbenchmarks for the hot paths: frame-level kernels, full feature
// extraction, and the clustering/training loops.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "pitchml/correlation.hpp"
#include "pitchml/features.hpp"
#include "pitchml/fft.hpp"
#include "pitchml/kmeans.hpp"
#include "pitchml/lpc.hpp"
#include "pitchml/voicing.hpp"

using namespace pitchml;

namespace {

std::vector<double> make_signal(int n, int fs) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 0.02);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = 0.3 * std::sin(2.0 * M_PI * 140.0 * i / fs) +
           0.1 * std::sin(2.0 * M_PI * 280.0 * i / fs) + g(rng);
  }
  return x;
}

constexpr int kFs = 16000;

}  // namespace

static void BM_Fft(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<std::complex<double>> x(n);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& v : x) v = g(rng);
  for (auto _ : state) {
    auto copy = x;
    fft(copy);
    benchmark::DoNotOptimize(copy);
  }
}
BENCHMARK(BM_Fft)->Arg(1024)->Arg(4096);

static void BM_CorrelationCurves(benchmark::State& state) {
  std::vector<double> frame = make_signal(480, kFs);
  const LagRange lags{40, 266};
  for (auto _ : state) {
    auto curves = correlation_curves(frame, lags);
    benchmark::DoNotOptimize(curves);
  }
}
BENCHMARK(BM_CorrelationCurves);

static void BM_LpResidual(benchmark::State& state) {
  Waveform w{make_signal(kFs, kFs), kFs};
  for (auto _ : state) {
    auto r = lp_residual(w);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_LpResidual);

// Full two-pass extraction of one second of audio; the dominant cost of
// both training and tracking.
static void BM_ExtractAllPerSecond(benchmark::State& state) {
  Waveform w{make_signal(kFs, kFs), kFs};
  for (auto _ : state) {
    auto m = extract_all(w, {});
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_ExtractAllPerSecond);

static void BM_KMeans(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat data;
  for (int i = 0; i < 2000; ++i) {
    Vec x(48);
    for (double& v : x) v = g(rng) + (i % 2) * 3.0;
    data.push_back(x);
  }
  for (auto _ : state) {
    auto m = fit_kmeans(data, 2, 0);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_KMeans);

static void BM_StackContext(benchmark::State& state) {
  Mat rows(10000, Vec(16, 1.0));
  for (auto _ : state) {
    auto s = stack_context(rows, 1);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_StackContext);

BENCHMARK_MAIN();
