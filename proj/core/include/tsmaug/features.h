// core/include/tsmaug/features.h
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

#ifndef TSMAUG_FEATURES_H_
#define TSMAUG_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tsmaug/audio-io.h"
#include "tsmaug/matrix.h"

namespace tsmaug {

struct MfccConfig {
  int num_coeffs = 23;  // c0 included
  double frame_len_ms = 25.0;
  double hop_ms = 10.0;
  int num_mel_filters = 23;
  double low_freq_hz = 20.0;
  double high_freq_hz = 7600.0;
  double preemphasis = 0.97;
  double log_floor = 1e-10;

  /// Throws Error(kInvalidConfig).
  void validate(int sample_rate) const;
};

struct FeatureMatrix {
  RealMatrix rows;                      // num_frames x num_coeffs
  std::vector<std::size_t> frame_times;  // first sample of each row's frame
  int sample_rate = 16000;

  std::size_t num_frames() const { return rows.rows(); }
  std::size_t num_coeffs() const { return rows.cols(); }
};

struct VadMask {
  std::vector<bool> keep;

  std::size_t size() const { return keep.size(); }
  std::size_t count_kept() const;
};

/// Kaldi-style high-resolution MFCCs: per frame pre-emphasis, Hamming window,
/// power spectrum, triangular mel filterbank, floored log, orthonormal DCT-II.
FeatureMatrix compute_mfcc(const AudioBuffer &audio, const MfccConfig &config = {});

/// Subtracts from every row the per-dimension mean of the rows whose frame
/// start lies within +/- window_ms / 2 of its own; the window is truncated at
/// the utterance edges.
FeatureMatrix sliding_mean_normalize(const FeatureMatrix &features,
                                     double window_ms = 3000.0);

inline constexpr double kVadEnergyFloor = 1e-10;
inline constexpr double kDefaultVadThresholdDb = -15.0;

/// A frame is kept when its energy is above the floor and its log energy (dB)
/// exceeds the utterance mean log energy plus threshold_db.
VadMask energy_vad(const AudioBuffer &audio, double frame_len_ms = 25.0,
                   double hop_ms = 10.0,
                   double threshold_db = kDefaultVadThresholdDb);

FeatureMatrix apply_vad(const FeatureMatrix &features, const VadMask &mask);

/// Feature file: u32 num_frames, u32 num_coeffs (little endian), then
/// num_frames * num_coeffs float32 values in row-major order.
std::vector<unsigned char> encode_features(const FeatureMatrix &features);
FeatureMatrix decode_features(std::span<const unsigned char> bytes);
void write_features(const std::filesystem::path &path, const FeatureMatrix &features);
FeatureMatrix read_features(const std::filesystem::path &path);

/// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

}  // namespace tsmaug

#endif  // TSMAUG_FEATURES_H_
