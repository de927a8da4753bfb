// core/src/augment.cc
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

#include "tsmaug/augment.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <set>
#include <string>

#include "tsmaug/parallel.h"
#include "tsmaug/error.h"
#include "tsmaug/fft.h"

namespace tsmaug {

namespace {

constexpr std::size_t kDirectConvolutionMax = 64;

StftParams default_tsm_params(int sample_rate) {
  return StftParams::from_ms(sample_rate, kFrameMs, kSynthesisHopMs, kSynthesisHopMs);
}

double peak(std::span<const double> x) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

std::filesystem::path wav_path(const std::filesystem::path &dir, const std::string &id) {
  return dir / (id + ".wav");
}

// One unit of work per source record; results are merged in index order.
struct Job {
  std::vector<UtteranceRecord> generated;
  std::optional<FileFailure> failure;
};

ExecutionResult merge(std::vector<UtteranceRecord> originals, std::vector<Job> &jobs) {
  ExecutionResult result{std::move(originals), {}};
  for (auto &job : jobs) {
    if (job.failure) result.failures.push_back(*job.failure);
    for (auto &r : job.generated) result.records.push_back(std::move(r));
  }
  return result;
}

void ensure_dir(const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir.string() + ": " + ec.message());
}

std::vector<std::size_t> draw_indices(std::size_t count, std::size_t choices,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> picks(count);
  for (auto &p : picks) p = static_cast<std::size_t>(rng() % choices);
  return picks;
}

}  // namespace

ClassHistogram class_histogram(std::span<const UtteranceRecord> manifest) {
  if (manifest.empty()) throw Error(ErrorCode::kEmptyManifest, "manifest has no records");
  ClassHistogram h;
  for (const auto &r : manifest) ++h[r.label];
  return h;
}

BalancePlan build_balance_plan(std::span<const UtteranceRecord> manifest,
                               std::span<const TsmRate> rates, const BalanceMode &mode) {
  if (rates.empty()) throw Error(ErrorCode::kInvalidRates, "no rates given");
  std::vector<TsmRate> sorted(rates.begin(), rates.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].alpha() == 1.0)
      throw Error(ErrorCode::kInvalidRates, "rate 1.0 duplicates the original");
    if (i > 0 && sorted[i] == sorted[i - 1])
      throw Error(ErrorCode::kInvalidRates, "duplicate rate " + format_value(sorted[i].alpha()));
  }
  const ClassHistogram hist = class_histogram(manifest);

  BalancePlan plan;
  if (mode.label) {
    if (!hist.contains(*mode.label))
      throw Error(ErrorCode::kUnknownLabel, "label '" + *mode.label + "' not in manifest");
    plan.target_class = *mode.label;
  } else {
    auto smallest = std::min_element(hist.begin(), hist.end(), [](const auto &a, const auto &b) {
      return a.second < b.second;
    });
    plan.target_class = smallest->first;
  }

  plan.assignments.reserve(manifest.size());
  for (const auto &r : manifest) {
    Assignment a{r, {}};
    if (r.label == plan.target_class) a.rates = sorted;
    plan.assignments.push_back(std::move(a));
  }
  return plan;
}

ClassHistogram planned_histogram(const BalancePlan &plan) {
  ClassHistogram h;
  for (const auto &a : plan.assignments) h[a.record.label] += 1 + a.rates.size();
  return h;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string speed_perturbed_id(const std::string &utt_id, TsmRate rate) {
  return utt_id + "_sp" + format_value(rate.alpha());
}

ExecutionResult execute_plan(const BalancePlan &plan, const std::filesystem::path &out_dir,
                             const ExecuteOptions &options) {
  if (options.iterations < 1)
    throw Error(ErrorCode::kBadIterations, "iterations must be >= 1");
  if (options.stft) options.stft->validate();

  std::vector<UtteranceRecord> originals;
  std::vector<std::size_t> work;
  for (std::size_t i = 0; i < plan.assignments.size(); ++i) {
    originals.push_back(plan.assignments[i].record);
    if (!plan.assignments[i].rates.empty()) work.push_back(i);
  }
  if (!work.empty()) ensure_dir(out_dir);
  std::sort(work.begin(), work.end(), [&](std::size_t a, std::size_t b) {
    return plan.assignments[a].record.utt_id < plan.assignments[b].record.utt_id;
  });

  std::vector<Job> jobs(work.size());
  parallel_for(work.size(), options.jobs, [&](std::size_t j) {
    const Assignment &a = plan.assignments[work[j]];
    try {
      const AudioBuffer audio = read_wav(a.record.path);
      const StftParams params = options.stft ? *options.stft
                                             : default_tsm_params(audio.sample_rate());
      for (TsmRate rate : a.rates) {
        const std::string id = speed_perturbed_id(a.record.utt_id, rate);
        const auto path = wav_path(out_dir, id);
        write_wav(path, time_scale(audio, rate, params, options.iterations));
        jobs[j].generated.push_back({id, path, a.record.label});
      }
    } catch (const std::exception &e) {
      jobs[j].failure = FileFailure{a.record.utt_id, e.what()};
    }
  });
  return merge(std::move(originals), jobs);
}

double rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

double noise_gain(double clean_rms, double noise_rms, double snr_db) {
  if (!(noise_rms > 0.0)) throw Error(ErrorCode::kSilentNoise, "noise RMS is zero");
  if (!std::isfinite(snr_db)) throw Error(ErrorCode::kInvalidArgument, "SNR must be finite");
  return clean_rms / (noise_rms * std::pow(10.0, snr_db / 20.0));
}

std::vector<double> fit_noise(std::span<const double> noise, std::size_t length) {
  if (noise.empty()) throw Error(ErrorCode::kSilentNoise, "noise is empty");
  std::vector<double> out(length);
  for (std::size_t i = 0; i < length; ++i) out[i] = noise[i % noise.size()];
  return out;
}

AudioBuffer mix_noise(const AudioBuffer &clean, const AudioBuffer &noise, double snr_db) {
  if (clean.sample_rate() != noise.sample_rate())
    throw Error(ErrorCode::kSampleRateMismatch,
                std::to_string(clean.sample_rate()) + " Hz vs " +
                    std::to_string(noise.sample_rate()) + " Hz");
  if (!(rms(noise.samples()) > 0.0)) throw Error(ErrorCode::kSilentNoise, "noise RMS is zero");
  std::vector<double> fitted = fit_noise(noise.samples(), clean.size());
  const double fitted_rms = rms(fitted);
  if (clean.empty()) return clean;
  // The loop can land entirely on a silent stretch of the noise.
  if (!(fitted_rms > 0.0))
    throw Error(ErrorCode::kSilentNoise, "noise is silent over the clean signal's length");
  const double g = noise_gain(rms(clean.samples()), fitted_rms, snr_db);
  auto c = clean.samples();
  for (std::size_t i = 0; i < fitted.size(); ++i) fitted[i] = c[i] + g * fitted[i];
  return AudioBuffer(std::move(fitted), clean.sample_rate());
}

std::vector<double> convolve_truncated(std::span<const double> dry,
                                       std::span<const double> rir) {
  if (rir.empty()) throw Error(ErrorCode::kEmptyRir, "impulse response is empty");
  const std::size_t n = dry.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  const std::size_t taps = std::min(rir.size(), n);
  if (taps <= kDirectConvolutionMax) {
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t kmax = std::min(taps, t + 1);
      double acc = 0.0;
      for (std::size_t k = 0; k < kmax; ++k) acc += rir[k] * dry[t - k];
      out[t] = acc;
    }
    return out;
  }
  const int size = next_power_of_two(static_cast<int>(n + taps - 1));
  RealFft fft(size);
  std::vector<std::complex<double>> a(fft.num_bins()), b(fft.num_bins());
  fft.forward(dry, a);
  fft.forward(rir.first(taps), b);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] *= b[k];
  std::vector<double> full(size);
  fft.inverse(a, full);
  std::copy_n(full.begin(), n, out.begin());
  return out;
}

AudioBuffer apply_reverb(const AudioBuffer &dry, const AudioBuffer &rir) {
  if (dry.sample_rate() != rir.sample_rate())
    throw Error(ErrorCode::kSampleRateMismatch,
                std::to_string(dry.sample_rate()) + " Hz vs " +
                    std::to_string(rir.sample_rate()) + " Hz");
  if (rir.empty()) throw Error(ErrorCode::kEmptyRir, "impulse response is empty");
  std::vector<double> wet = convolve_truncated(dry.samples(), rir.samples());
  const double wet_peak = peak(wet);
  if (wet_peak > 0.0) {
    const double g = peak(dry.samples()) / wet_peak;
    for (double &v : wet) v *= g;
  }
  return AudioBuffer(std::move(wet), dry.sample_rate());
}

ExecutionResult execute_noise_mix(std::span<const UtteranceRecord> manifest,
                                  std::span<const UtteranceRecord> noises, double snr_db,
                                  const std::filesystem::path &out_dir, std::uint64_t seed,
                                  int jobs) {
  if (noises.empty()) throw Error(ErrorCode::kEmptyManifest, "noise manifest has no records");
  if (!std::isfinite(snr_db)) throw Error(ErrorCode::kInvalidArgument, "SNR must be finite");
  ensure_dir(out_dir);
  const auto picks = draw_indices(manifest.size(), noises.size(), seed);
  std::vector<Job> results(manifest.size());
  parallel_for(manifest.size(), jobs, [&](std::size_t i) {
    const UtteranceRecord &r = manifest[i];
    try {
      const AudioBuffer clean = read_wav(r.path);
      const AudioBuffer noise = read_wav(noises[picks[i]].path);
      const std::string id = r.utt_id + "_noise" + format_value(snr_db);
      const auto path = wav_path(out_dir, id);
      write_wav(path, mix_noise(clean, noise, snr_db));
      results[i].generated.push_back({id, path, r.label});
    } catch (const std::exception &e) {
      results[i].failure = FileFailure{r.utt_id, e.what()};
    }
  });
  return merge({}, results);
}

ExecutionResult execute_reverb(std::span<const UtteranceRecord> manifest,
                               std::span<const UtteranceRecord> rirs,
                               const std::filesystem::path &out_dir, std::uint64_t seed,
                               int jobs) {
  if (rirs.empty()) throw Error(ErrorCode::kEmptyManifest, "RIR manifest has no records");
  ensure_dir(out_dir);
  const auto picks = draw_indices(manifest.size(), rirs.size(), seed);
  std::vector<Job> results(manifest.size());
  parallel_for(manifest.size(), jobs, [&](std::size_t i) {
    const UtteranceRecord &r = manifest[i];
    try {
      const AudioBuffer dry = read_wav(r.path);
      const AudioBuffer rir = read_wav(rirs[picks[i]].path);
      const std::string id = r.utt_id + "_reverb";
      const auto path = wav_path(out_dir, id);
      write_wav(path, apply_reverb(dry, rir));
      results[i].generated.push_back({id, path, r.label});
    } catch (const std::exception &e) {
      results[i].failure = FileFailure{r.utt_id, e.what()};
    }
  });
  return merge({}, results);
}

}  // namespace tsmaug
