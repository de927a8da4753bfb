// core/src/rtisi.cc
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

#include "tsmaug/rtisi.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tsmaug/error.h"

namespace tsmaug {

TsmRate::TsmRate(double alpha) : alpha_(alpha) {
  if (!std::isfinite(alpha) || alpha < kMin || alpha > kMax)
    throw Error(ErrorCode::kOutOfRange,
                "rate " + std::to_string(alpha) + " outside [0.5, 2.0]");
}

TsmRate compute_rate(double analysis_hop_ms, double synthesis_hop_ms) {
  if (!(analysis_hop_ms > 0.0) || !(synthesis_hop_ms > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "step sizes must be positive");
  return TsmRate(analysis_hop_ms / synthesis_hop_ms);
}

std::size_t expected_length(std::size_t input_len, TsmRate rate) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(input_len) / rate.alpha()));
}

RtisiSynthesizer::RtisiSynthesizer(const StftParams &params, int synthesis_hop,
                                   int iterations)
    : frame_len_(params.frame_len), hop_(synthesis_hop), fft_(params.fft_size) {
  if (iterations < 1)
    throw Error(ErrorCode::kBadIterations,
                "iterations must be >= 1, got " + std::to_string(iterations));
  if (frame_len_ < 2 || frame_len_ > params.fft_size)
    throw Error(ErrorCode::kInvalidArgument, "frame length must be in [2, fft size]");
  if (hop_ <= 0 || hop_ > frame_len_)
    throw Error(ErrorCode::kInvalidArgument,
                "synthesis hop " + std::to_string(hop_) + " outside (0, frame length]");

  window_ = make_window(params.window, frame_len_);
  window_sq_.resize(window_.size());
  for (std::size_t i = 0; i < window_.size(); ++i) window_sq_[i] = window_[i] * window_[i];

  const auto len = static_cast<std::size_t>(frame_len_);
  state_.partial_ola.assign(len, 0.0);
  state_.window_sum.assign(len, 0.0);
  state_.energy_sum.assign(len, 0.0);
  state_.iterations = iterations;

  phase_.resize(fft_.num_bins());
  spec_.resize(fft_.num_bins());
  time_.resize(fft_.size());
  segment_.resize(len);
  windowed_.resize(len);
  contribution_.resize(len);
}

void RtisiSynthesizer::commit(std::size_t count) {
  auto &s = state_;
  for (std::size_t i = 0; i < count; ++i)
    s.committed.push_back(s.partial_ola[i] / std::max(s.window_sum[i], kOlaFloor));
  auto shift = [count](std::vector<double> &buf) {
    std::move(buf.begin() + static_cast<std::ptrdiff_t>(count), buf.end(), buf.begin());
    std::fill(buf.end() - static_cast<std::ptrdiff_t>(count), buf.end(), 0.0);
  };
  shift(s.partial_ola);
  shift(s.window_sum);
  shift(s.energy_sum);
}

// Unit phasors of the analysis-windowed segment's spectrum; leaves the
// unwindowed spectrum in spec_.
void RtisiSynthesizer::unit_phase(std::span<const double> segment) {
  for (std::size_t i = 0; i < windowed_.size(); ++i) windowed_[i] = segment[i] * window_[i];
  fft_.forward(windowed_, spec_);
  for (std::size_t k = 0; k < spec_.size(); ++k) {
    const double mag = std::abs(spec_[k]);
    phase_[k] = mag > 0.0 ? spec_[k] / mag : std::complex<double>(1.0, 0.0);
  }
}

void RtisiSynthesizer::process_frame(std::span<const double> target,
                                     FrameTrace *trace) {
  if (target.size() != static_cast<std::size_t>(fft_.num_bins()))
    throw Error(ErrorCode::kInvalidArgument,
                "expected " + std::to_string(fft_.num_bins()) + " bins, got " +
                    std::to_string(target.size()));
  auto &s = state_;
  if (s.frame_cursor > 0) commit(static_cast<std::size_t>(hop_));

  const auto len = static_cast<std::size_t>(frame_len_);
  if (s.frame_cursor == 0) {
    std::fill(phase_.begin(), phase_.end(), std::complex<double>(1.0, 0.0));
  } else {
    for (std::size_t i = 0; i < len; ++i)
      segment_[i] = s.partial_ola[i] / std::max(s.window_sum[i], kOlaFloor);
    unit_phase(segment_);
  }

  if (trace) {
    trace->frame = s.frame_cursor;
    trace->inconsistency.clear();
  }

  const int n = fft_.size();
  const bool even = n % 2 == 0;
  for (int it = 0; it < s.iterations; ++it) {
    for (std::size_t k = 0; k < spec_.size(); ++k) spec_[k] = target[k] * phase_[k];
    fft_.inverse(spec_, time_);
    for (std::size_t i = 0; i < len; ++i) {
      contribution_[i] = window_[i] * time_[i];
      segment_[i] = (s.partial_ola[i] + contribution_[i]) /
                    std::max(s.window_sum[i] + window_sq_[i], kOlaFloor);
    }
    unit_phase(segment_);

    if (trace) {
      double overlap = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const double x = segment_[i];
        overlap += s.window_sum[i] * x * x - 2.0 * s.partial_ola[i] * x + s.energy_sum[i];
      }
      double spectral = 0.0;
      for (std::size_t k = 0; k < spec_.size(); ++k) {
        const double d = std::abs(spec_[k]) - target[k];
        const bool single = k == 0 || (even && k + 1 == spec_.size());
        spectral += (single ? 1.0 : 2.0) * d * d;
      }
      trace->inconsistency.push_back(overlap + spectral / n);
    }
  }

  for (std::size_t i = 0; i < len; ++i) {
    s.partial_ola[i] += contribution_[i];
    s.window_sum[i] += window_sq_[i];
    s.energy_sum[i] += time_[i] * time_[i];
  }
  ++s.frame_cursor;
}

std::vector<double> RtisiSynthesizer::finish() {
  if (state_.frame_cursor > 0) commit(static_cast<std::size_t>(frame_len_));
  return std::move(state_.committed);
}

AudioBuffer rtisi_invert(const MagnitudeSource &source, int synthesis_hop,
                         int iterations, const FrameCallback &on_frame) {
  if (source.num_frames() == 0)
    throw Error(ErrorCode::kEmptyInput, "rtisi_invert: empty spectrogram");
  if (iterations < 1)
    throw Error(ErrorCode::kBadIterations,
                "iterations must be >= 1, got " + std::to_string(iterations));
  RtisiSynthesizer synth(source.params(), synthesis_hop, iterations);
  FrameTrace trace;
  for (std::size_t f = 0; f < source.num_frames(); ++f) {
    synth.process_frame(source.frame(f), on_frame ? &trace : nullptr);
    if (on_frame) on_frame(trace);
  }
  return AudioBuffer(synth.finish(), source.sample_rate());
}

AudioBuffer rtisi_invert(const MagnitudeSpectrogram &magspec, int synthesis_hop,
                         int iterations, const FrameCallback &on_frame) {
  return rtisi_invert(SpectrogramSource(magspec), synthesis_hop, iterations, on_frame);
}

AudioBuffer time_scale(const AudioBuffer &audio, TsmRate rate,
                       const StftParams &params, int iterations) {
  StftParams p = params;
  p.analysis_hop = static_cast<int>(std::lround(rate.alpha() * p.synthesis_hop));
  if (p.analysis_hop > p.frame_len)
    throw Error(ErrorCode::kOutOfRange,
                "analysis hop " + std::to_string(p.analysis_hop) +
                    " exceeds frame length " + std::to_string(p.frame_len));
  p.validate();
  if (audio.size() < static_cast<std::size_t>(p.frame_len))
    throw Error(ErrorCode::kSignalTooShort,
                std::to_string(audio.size()) + " samples < frame length " +
                    std::to_string(p.frame_len));

  const MagnitudeSpectrogram magspec = stft_magnitude(audio, p);
  AudioBuffer out = rtisi_invert(magspec, p.synthesis_hop, iterations);

  auto &y = out.mutable_samples();
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, std::abs(v));
  if (peak > 1.0) {
    const double g = kPeakTarget / peak;
    for (double &v : y) v *= g;
  }
  return out;
}

AudioBuffer time_scale(const AudioBuffer &audio, TsmRate rate, int iterations) {
  return time_scale(audio, rate,
                    StftParams::from_ms(audio.sample_rate(), kFrameMs,
                                        kSynthesisHopMs, kSynthesisHopMs),
                    iterations);
}

double spectral_convergence(const MagnitudeSpectrogram &target,
                            const AudioBuffer &audio) {
  StftParams p = target.params;
  p.analysis_hop = p.synthesis_hop;
  const std::size_t needed = target.num_frames();
  if (num_frames(audio.size(), p.frame_len, p.analysis_hop) < needed)
    throw Error(ErrorCode::kLengthMismatch,
                "audio yields " +
                    std::to_string(num_frames(audio.size(), p.frame_len, p.analysis_hop)) +
                    " frames at hop " + std::to_string(p.analysis_hop) + ", target has " +
                    std::to_string(needed));
  const MagnitudeSpectrogram actual = stft_magnitude(audio, p);
  double num = 0.0, den = 0.0;
  for (std::size_t f = 0; f < needed; ++f) {
    auto a = actual.mags.row(f);
    auto t = target.mags.row(f);
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double d = a[k] - t[k];
      num += d * d;
      den += t[k] * t[k];
    }
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num) / std::sqrt(den);
}

}  // namespace tsmaug
