// core/include/tsmaug/rtisi.h
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

#ifndef TSMAUG_RTISI_H_
#define TSMAUG_RTISI_H_

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tsmaug/audio-io.h"
#include "tsmaug/fft.h"
#include "tsmaug/stft.h"

namespace tsmaug {

/// Speech-rate factor alpha = Sa / Ss. alpha < 1 slows speech down (longer
/// output), alpha > 1 speeds it up.
class TsmRate {
 public:
  static constexpr double kMin = 0.5;
  static constexpr double kMax = 2.0;

  /// Throws Error(kOutOfRange) outside [kMin, kMax].
  explicit TsmRate(double alpha);

  double alpha() const { return alpha_; }
  bool operator==(const TsmRate &) const = default;
  auto operator<=>(const TsmRate &) const = default;

 private:
  double alpha_;
};

inline constexpr double kSynthesisHopMs = 10.0;
inline constexpr double kFrameMs = 25.0;
inline constexpr int kDefaultIterations = 10;

TsmRate compute_rate(double analysis_hop_ms, double synthesis_hop_ms);

/// round(input_len / alpha).
std::size_t expected_length(std::size_t input_len, TsmRate rate);

/// Read-only access to a magnitude spectrogram, one frame at a time.
/// rtisi_invert only goes through this interface, which lets tests observe
/// the order in which frames are requested.
class MagnitudeSource {
 public:
  virtual ~MagnitudeSource() = default;
  virtual std::size_t num_frames() const = 0;
  virtual std::span<const double> frame(std::size_t index) const = 0;
  virtual const StftParams &params() const = 0;
  virtual int sample_rate() const = 0;
};

class SpectrogramSource final : public MagnitudeSource {
 public:
  explicit SpectrogramSource(const MagnitudeSpectrogram &spec) : spec_(spec) {}
  std::size_t num_frames() const override { return spec_.num_frames(); }
  std::span<const double> frame(std::size_t index) const override {
    return spec_.mags.row(index);
  }
  const StftParams &params() const override { return spec_.params; }
  int sample_rate() const override { return spec_.sample_rate; }

 private:
  const MagnitudeSpectrogram &spec_;
};

struct RtisiState {
  std::vector<double> committed;    // finalized output samples
  std::vector<double> partial_ola;  // L samples: sum of w * y over open frames
  std::vector<double> window_sum;   // L samples: sum of w^2 over open frames
  std::vector<double> energy_sum;   // L samples: sum of y^2 over open frames
  std::size_t frame_cursor = 0;     // frames processed so far
  int iterations = kDefaultIterations;
};

/// Per-frame diagnostics. inconsistency[i] is the least-squares objective
/// after refinement i: the residual of the segment estimate against the
/// already-synthesized overlapping frames plus the squared distance between
/// its windowed spectrum magnitude and the target, both in the time-domain
/// energy scale. It never increases within a frame.
struct FrameTrace {
  std::size_t frame = 0;
  std::vector<double> inconsistency;
};

/// Causal phase reconstruction. Frames are pushed in order; each one is
/// refined against the overlap-add of the frames before it and nothing
/// else. The oldest Ss samples are committed when the next frame arrives.
class RtisiSynthesizer {
 public:
  RtisiSynthesizer(const StftParams &params, int synthesis_hop, int iterations);

  /// `target` holds fft_size / 2 + 1 magnitudes.
  void process_frame(std::span<const double> target, FrameTrace *trace = nullptr);

  /// Flushes the open overlap region and returns all committed samples.
  std::vector<double> finish();

  const RtisiState &state() const { return state_; }
  std::span<const double> window() const { return window_; }

 private:
  void commit(std::size_t count);
  void unit_phase(std::span<const double> segment);

  int frame_len_;
  int hop_;
  RealFft fft_;
  std::vector<double> window_;
  std::vector<double> window_sq_;
  RtisiState state_;
  // scratch
  std::vector<std::complex<double>> phase_;
  std::vector<std::complex<double>> spec_;
  std::vector<double> time_;
  std::vector<double> segment_;
  std::vector<double> windowed_;
  std::vector<double> contribution_;
};

using FrameCallback = std::function<void(const FrameTrace &)>;

/// Inverts a magnitude spectrogram at `synthesis_hop`. Output length is
/// (num_frames - 1) * synthesis_hop + L.
AudioBuffer rtisi_invert(const MagnitudeSource &source, int synthesis_hop,
                         int iterations, const FrameCallback &on_frame = {});
AudioBuffer rtisi_invert(const MagnitudeSpectrogram &magspec, int synthesis_hop,
                         int iterations, const FrameCallback &on_frame = {});

/// Time-scale modification: frame at Sa = round(alpha * Ss), keep only
/// magnitudes, resynthesize at Ss. params.analysis_hop is ignored. If the
/// result peaks above 1.0 it is rescaled to peak at kPeakTarget.
AudioBuffer time_scale(const AudioBuffer &audio, TsmRate rate,
                       const StftParams &params,
                       int iterations = kDefaultIterations);

/// time_scale with the default 25 ms frame and 10 ms synthesis hop at the
/// buffer's own sample rate.
AudioBuffer time_scale(const AudioBuffer &audio, TsmRate rate,
                       int iterations = kDefaultIterations);

inline constexpr double kPeakTarget = 0.99;

/// ||STFT(audio)| - target|_F / |target|_F using the target's frame length,
/// window and FFT size at hop = target.params.synthesis_hop. Only the first
/// target.num_frames() frames of the audio are compared.
double spectral_convergence(const MagnitudeSpectrogram &target,
                            const AudioBuffer &audio);

}  // namespace tsmaug

#endif  // TSMAUG_RTISI_H_
