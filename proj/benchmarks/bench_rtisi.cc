// benchmarks/bench_rtisi.cc
//
// Copyright 2026  The tsmaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "tsmaug/rtisi.h"
#include "tsmaug/stft.h"

namespace {

tsmaug::AudioBuffer noise_signal(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d(0.0, 0.1);
  std::vector<double> x(n);
  for (auto &v : x) v = d(rng);
  return tsmaug::AudioBuffer(std::move(x), 16000);
}

// Arguments: signal seconds, alpha * 10, iterations.
void BM_TimeScale(benchmark::State &state) {
  const auto x = noise_signal(static_cast<std::size_t>(state.range(0)) * 16000);
  const tsmaug::TsmRate rate(state.range(1) / 10.0);
  const int iterations = static_cast<int>(state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(tsmaug::time_scale(x, rate, iterations));
  state.counters["x_realtime"] = benchmark::Counter(
      static_cast<double>(state.range(0)) * state.iterations(), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_TimeScale)
    ->Args({1, 8, 10})
    ->Args({1, 12, 10})
    ->Args({5, 10, 10})
    ->Args({5, 10, 1})
    ->Unit(benchmark::kMillisecond);

void BM_StftMagnitude(benchmark::State &state) {
  const auto x = noise_signal(static_cast<std::size_t>(state.range(0)) * 16000);
  const tsmaug::StftParams params;
  for (auto _ : state) benchmark::DoNotOptimize(tsmaug::stft_magnitude(x, params));
}
BENCHMARK(BM_StftMagnitude)->Arg(1)->Arg(10)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
