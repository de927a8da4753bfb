// benchmarks/bench_features.cc
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

#include <random>
#include <vector>

#include "tsmaug/augment.h"
#include "tsmaug/features.h"

namespace {

tsmaug::AudioBuffer noise_signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 0.1);
  std::vector<double> x(n);
  for (auto &v : x) v = d(rng);
  return tsmaug::AudioBuffer(std::move(x), 16000);
}

void BM_Mfcc(benchmark::State &state) {
  const auto x = noise_signal(static_cast<std::size_t>(state.range(0)) * 16000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(tsmaug::compute_mfcc(x));
}
BENCHMARK(BM_Mfcc)->Arg(1)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_FeaturePipeline(benchmark::State &state) {
  const auto x = noise_signal(static_cast<std::size_t>(state.range(0)) * 16000, 2);
  for (auto _ : state) {
    const auto mask = tsmaug::energy_vad(x);
    benchmark::DoNotOptimize(
        tsmaug::sliding_mean_normalize(tsmaug::apply_vad(tsmaug::compute_mfcc(x), mask)));
  }
}
BENCHMARK(BM_FeaturePipeline)->Arg(10)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_Reverb(benchmark::State &state) {
  const auto dry = noise_signal(16000 * 5, 3);
  const auto rir = noise_signal(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(tsmaug::apply_reverb(dry, rir));
}
BENCHMARK(BM_Reverb)->Arg(32)->Arg(8000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
