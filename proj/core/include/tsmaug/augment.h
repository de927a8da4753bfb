// core/include/tsmaug/augment.h
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

#ifndef TSMAUG_AUGMENT_H_
#define TSMAUG_AUGMENT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsmaug/audio-io.h"
#include "tsmaug/rtisi.h"
#include "tsmaug/stft.h"

namespace tsmaug {

using ClassHistogram = std::map<std::string, std::size_t>;

/// Throws Error(kEmptyManifest) for an empty manifest.
ClassHistogram class_histogram(std::span<const UtteranceRecord> manifest);

/// Which class receives the rate-modified copies. Without a label the
/// smallest class is chosen (ties go to the lexicographically first label).
struct BalanceMode {
  std::optional<std::string> label;

  static BalanceMode min_class() { return {}; }
  static BalanceMode explicit_label(std::string l) { return {std::move(l)}; }
};

struct Assignment {
  UtteranceRecord record;
  std::vector<TsmRate> rates;  // empty for records left untouched
};

struct BalancePlan {
  std::vector<Assignment> assignments;  // one per manifest record, in order
  std::string target_class;
};

/// Every record of the target class is assigned all `rates`; the original is
/// always kept, so the target count becomes original * (rates + 1). Rates
/// must be non-empty, distinct, and exclude 1.0 (Error(kInvalidRates)).
BalancePlan build_balance_plan(std::span<const UtteranceRecord> manifest,
                               std::span<const TsmRate> rates,
                               const BalanceMode &mode = BalanceMode::min_class());

/// Per-class counts after the plan runs.
ClassHistogram planned_histogram(const BalancePlan &plan);

struct FileFailure {
  std::string utt_id;
  std::string message;
};

struct ExecutionResult {
  std::vector<UtteranceRecord> records;
  std::vector<FileFailure> failures;
};

struct ExecuteOptions {
  /// Sample-domain parameters; when unset, 25 ms frames and a 10 ms
  /// synthesis hop are derived at each file's own sample rate.
  std::optional<StftParams> stft;
  int iterations = kDefaultIterations;
  int jobs = 1;
};

/// "0.8", "1.1", "-5", "20": the shortest %g rendering used in generated ids.
std::string format_value(double v);

/// Generated utterance id for a speed-perturbed copy: <utt_id>_sp<alpha>.
std::string speed_perturbed_id(const std::string &utt_id, TsmRate rate);

/// Writes <out_dir>/<utt_id>_sp<alpha>.wav for every assigned rate. The
/// result holds the plan's records in order followed by the generated ones
/// sorted by source utt_id then rate, independent of `jobs`. A source that
/// cannot be read or written is reported in `failures` and skipped.
ExecutionResult execute_plan(const BalancePlan &plan,
                             const std::filesystem::path &out_dir,
                             const ExecuteOptions &options = {});

double rms(std::span<const double> x);

/// Scale applied to the noise: rms(clean) / (rms(noise) * 10^(snr_db / 20)).
double noise_gain(double clean_rms, double noise_rms, double snr_db);

/// Noise looped or truncated to the clean length.
std::vector<double> fit_noise(std::span<const double> noise, std::size_t length);

/// Adds noise at `snr_db` measured over the whole utterance.
AudioBuffer mix_noise(const AudioBuffer &clean, const AudioBuffer &noise, double snr_db);

/// Full linear convolution truncated to dry.size(); no level adjustment.
std::vector<double> convolve_truncated(std::span<const double> dry,
                                       std::span<const double> rir);

/// Convolves with the room impulse response and rescales the result to the
/// dry signal's peak.
AudioBuffer apply_reverb(const AudioBuffer &dry, const AudioBuffer &rir);

/// Batch noise mixing: each utterance gets a noise record drawn with a
/// seeded generator, in manifest order. Writes <utt_id>_noise<snr>.wav.
ExecutionResult execute_noise_mix(std::span<const UtteranceRecord> manifest,
                                  std::span<const UtteranceRecord> noises,
                                  double snr_db, const std::filesystem::path &out_dir,
                                  std::uint64_t seed, int jobs = 1);

/// Batch reverberation with seeded RIR selection. Writes <utt_id>_reverb.wav.
ExecutionResult execute_reverb(std::span<const UtteranceRecord> manifest,
                               std::span<const UtteranceRecord> rirs,
                               const std::filesystem::path &out_dir,
                               std::uint64_t seed, int jobs = 1);

}  // namespace tsmaug

#endif  // TSMAUG_AUGMENT_H_
