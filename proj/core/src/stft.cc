// core/src/stft.cc
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

#include "tsmaug/stft.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "tsmaug/error.h"
#include "tsmaug/fft.h"

namespace tsmaug {

void StftParams::validate() const {
  if (frame_len <= 0)
    throw Error(ErrorCode::kInvalidArgument, "frame length must be positive");
  if (analysis_hop <= 0 || analysis_hop > frame_len)
    throw Error(ErrorCode::kInvalidArgument,
                "analysis hop " + std::to_string(analysis_hop) +
                    " outside (0, frame length]");
  if (synthesis_hop <= 0 || synthesis_hop > frame_len)
    throw Error(ErrorCode::kInvalidArgument,
                "synthesis hop " + std::to_string(synthesis_hop) +
                    " outside (0, frame length]");
  if (fft_size < frame_len)
    throw Error(ErrorCode::kFftSizeTooSmall,
                "fft size " + std::to_string(fft_size) + " < frame length " +
                    std::to_string(frame_len));
}

int ms_to_samples(double ms, int sample_rate) {
  return static_cast<int>(std::lround(ms * sample_rate / 1000.0));
}

int next_power_of_two(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

StftParams StftParams::from_ms(int sample_rate, double frame_ms,
                               double analysis_hop_ms, double synthesis_hop_ms) {
  StftParams p;
  p.frame_len = ms_to_samples(frame_ms, sample_rate);
  p.analysis_hop = ms_to_samples(analysis_hop_ms, sample_rate);
  p.synthesis_hop = ms_to_samples(synthesis_hop_ms, sample_rate);
  p.fft_size = next_power_of_two(std::max(p.frame_len, 2));
  p.validate();
  return p;
}

std::vector<double> make_window(WindowKind kind, int length) {
  if (length < 2)
    throw Error(ErrorCode::kInvalidLength,
                "window length must be >= 2, got " + std::to_string(length));
  std::vector<double> w(static_cast<std::size_t>(length));
  switch (kind) {
    case WindowKind::kHamming: {
      const double denom = length - 1;
      // Fill the first half and mirror it so symmetry is exact.
      for (int n = 0; n < (length + 1) / 2; ++n) {
        double v = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / denom);
        w[n] = v;
        w[length - 1 - n] = v;
      }
      if (length % 2 == 1) w[length / 2] = 1.0;
      break;
    }
  }
  return w;
}

std::size_t num_frames(std::size_t signal_len, int frame_len, int hop) {
  if (signal_len < static_cast<std::size_t>(frame_len)) return 0;
  return (signal_len - frame_len) / hop + 1;
}

FrameMatrix frame_signal(const AudioBuffer &audio, const StftParams &params) {
  params.validate();
  if (audio.size() < static_cast<std::size_t>(params.frame_len))
    throw Error(ErrorCode::kSignalTooShort,
                std::to_string(audio.size()) + " samples < frame length " +
                    std::to_string(params.frame_len));
  const std::size_t n = num_frames(audio.size(), params.frame_len, params.analysis_hop);
  const auto window = make_window(params.window, params.frame_len);
  FrameMatrix out{RealMatrix(n, params.frame_len), params, audio.sample_rate()};
  auto samples = audio.samples();
  for (std::size_t f = 0; f < n; ++f) {
    auto row = out.frames.row(f);
    const std::size_t start = f * params.analysis_hop;
    for (int i = 0; i < params.frame_len; ++i) row[i] = samples[start + i] * window[i];
  }
  return out;
}

MagnitudeSpectrogram stft_magnitude(const FrameMatrix &frames, int fft_size) {
  if (fft_size < frames.params.frame_len)
    throw Error(ErrorCode::kFftSizeTooSmall,
                "fft size " + std::to_string(fft_size) + " < frame length " +
                    std::to_string(frames.params.frame_len));
  StftParams params = frames.params;
  params.fft_size = fft_size;
  RealFft fft(fft_size);
  MagnitudeSpectrogram out{RealMatrix(frames.frames.rows(), fft.num_bins()), params,
                           frames.sample_rate};
  std::vector<std::complex<double>> spec(fft.num_bins());
  for (std::size_t f = 0; f < frames.frames.rows(); ++f) {
    fft.forward(frames.frames.row(f), spec);
    auto row = out.mags.row(f);
    for (std::size_t k = 0; k < spec.size(); ++k) row[k] = std::abs(spec[k]);
  }
  return out;
}

MagnitudeSpectrogram stft_magnitude(const AudioBuffer &audio,
                                    const StftParams &params) {
  return stft_magnitude(frame_signal(audio, params), params.fft_size);
}

AudioBuffer overlap_add(const FrameMatrix &frames, int hop,
                        std::span<const double> window, bool normalize) {
  if (frames.frames.empty())
    throw Error(ErrorCode::kEmptyInput, "overlap_add: no frames");
  if (hop <= 0) throw Error(ErrorCode::kInvalidArgument, "overlap_add: hop must be > 0");
  const std::size_t len = frames.frames.cols();
  if (window.size() != len)
    throw Error(ErrorCode::kInvalidArgument, "overlap_add: window length mismatch");
  const std::size_t n = frames.frames.rows();
  const std::size_t out_len = (n - 1) * hop + len;
  std::vector<double> y(out_len, 0.0);
  std::vector<double> wsum(out_len, 0.0);
  for (std::size_t f = 0; f < n; ++f) {
    auto row = frames.frames.row(f);
    const std::size_t start = f * hop;
    for (std::size_t i = 0; i < len; ++i) {
      y[start + i] += window[i] * row[i];
      wsum[start + i] += window[i] * window[i];
    }
  }
  if (normalize) {
    for (std::size_t t = 0; t < out_len; ++t) y[t] /= std::max(wsum[t], kOlaFloor);
  }
  return AudioBuffer(std::move(y), frames.sample_rate);
}

}  // namespace tsmaug
