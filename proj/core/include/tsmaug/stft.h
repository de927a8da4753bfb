// core/include/tsmaug/stft.h
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

#ifndef TSMAUG_STFT_H_
#define TSMAUG_STFT_H_

#include <cstddef>
#include <span>
#include <vector>

#include "tsmaug/audio-io.h"
#include "tsmaug/matrix.h"

namespace tsmaug {

enum class WindowKind { kHamming };

struct StftParams {
  int frame_len = 400;        // L
  int analysis_hop = 160;     // Sa
  int synthesis_hop = 160;    // Ss
  int fft_size = 512;
  WindowKind window = WindowKind::kHamming;

  /// Throws Error(kInvalidArgument) unless 0 < hops <= frame_len <= fft_size.
  void validate() const;

  /// Converts millisecond values at `sample_rate` to samples (rounded to
  /// nearest) and picks the smallest power-of-two FFT >= frame length.
  static StftParams from_ms(int sample_rate, double frame_ms,
                            double analysis_hop_ms, double synthesis_hop_ms);

  bool operator==(const StftParams &) const = default;
};

int ms_to_samples(double ms, int sample_rate);
int next_power_of_two(int n);

/// Symmetric window, w[n] = 0.54 - 0.46 cos(2 pi n / (length - 1)) for
/// Hamming. Throws Error(kInvalidLength) for length < 2.
std::vector<double> make_window(WindowKind kind, int length);

/// Number of full frames: floor((len - L) / hop) + 1, or 0 if len < L.
std::size_t num_frames(std::size_t signal_len, int frame_len, int hop);

/// Windowed analysis frames taken every analysis_hop samples. Trailing
/// samples that do not fill a frame are dropped.
struct FrameMatrix {
  RealMatrix frames;  // num_frames x frame_len
  StftParams params;
  int sample_rate = 16000;
};

/// Magnitudes of the non-negative-frequency bins, num_frames x (fft/2 + 1).
struct MagnitudeSpectrogram {
  RealMatrix mags;
  StftParams params;
  int sample_rate = 16000;

  std::size_t num_frames() const { return mags.rows(); }
  std::size_t num_bins() const { return mags.cols(); }
};

FrameMatrix frame_signal(const AudioBuffer &audio, const StftParams &params);

/// Zero pads each frame to `fft_size` and takes |DFT|. The returned params
/// carry `fft_size`.
MagnitudeSpectrogram stft_magnitude(const FrameMatrix &frames, int fft_size);

/// frame_signal followed by stft_magnitude at params.fft_size.
MagnitudeSpectrogram stft_magnitude(const AudioBuffer &audio,
                                    const StftParams &params);

/// Applies `window` to every frame and sums them at `hop`. With `normalize`
/// the sum at each sample is divided by the summed squared window, floored
/// at kOlaFloor. Output length is (num_frames - 1) * hop + L.
AudioBuffer overlap_add(const FrameMatrix &frames, int hop,
                        std::span<const double> window, bool normalize);

inline constexpr double kOlaFloor = 1e-8;

}  // namespace tsmaug

#endif  // TSMAUG_STFT_H_
