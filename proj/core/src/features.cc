// core/src/features.cc
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

#include "tsmaug/features.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>

#include "tsmaug/error.h"
#include "tsmaug/fft.h"
#include "tsmaug/stft.h"

namespace tsmaug {

namespace {

struct MelBank {
  int first_bin = 0;
  std::vector<double> weights;
};

std::vector<MelBank> make_mel_banks(const MfccConfig &c, int sample_rate, int fft_size) {
  const double mel_lo = hz_to_mel(c.low_freq_hz);
  const double mel_hi = hz_to_mel(c.high_freq_hz);
  const double delta = (mel_hi - mel_lo) / (c.num_mel_filters + 1);
  const int bins = fft_size / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate) / fft_size;
  std::vector<MelBank> banks(c.num_mel_filters);
  for (int m = 0; m < c.num_mel_filters; ++m) {
    const double left = mel_lo + m * delta;
    const double center = left + delta;
    const double right = center + delta;
    MelBank &bank = banks[m];
    bank.first_bin = -1;
    for (int k = 0; k < bins; ++k) {
      const double mel = hz_to_mel(k * bin_hz);
      if (mel <= left || mel >= right) continue;
      const double w = mel <= center ? (mel - left) / (center - left)
                                     : (right - mel) / (right - center);
      if (bank.first_bin < 0) bank.first_bin = k;
      bank.weights.resize(static_cast<std::size_t>(k - bank.first_bin + 1), 0.0);
      bank.weights.back() = w;
    }
    if (bank.first_bin < 0)
      throw Error(ErrorCode::kInvalidConfig,
                  "mel filter " + std::to_string(m) + " covers no FFT bins");
  }
  return banks;
}

// Orthonormal DCT-II rows 0..num_coeffs-1 over num_filters inputs.
RealMatrix make_dct(int num_coeffs, int num_filters) {
  RealMatrix dct(num_coeffs, num_filters);
  const double n = num_filters;
  for (int j = 0; j < num_coeffs; ++j) {
    const double scale = j == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int m = 0; m < num_filters; ++m)
      dct(j, m) = scale * std::cos(std::numbers::pi * j * (m + 0.5) / n);
  }
  return dct;
}

void put_u32(std::vector<unsigned char> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint32_t get_u32(const unsigned char *p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

double hz_to_mel(double hz) { return 1127.0 * std::log(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::exp(mel / 1127.0) - 1.0); }

void MfccConfig::validate(int sample_rate) const {
  auto fail = [](const std::string &msg) { throw Error(ErrorCode::kInvalidConfig, msg); };
  if (num_coeffs < 1) fail("num_coeffs must be >= 1");
  if (num_coeffs > num_mel_filters) fail("num_coeffs exceeds num_mel_filters");
  if (!(frame_len_ms > 0.0) || !(hop_ms > 0.0)) fail("frame length and hop must be > 0");
  if (!(low_freq_hz >= 0.0) || !(low_freq_hz < high_freq_hz))
    fail("need 0 <= low_freq_hz < high_freq_hz");
  if (high_freq_hz > sample_rate / 2.0) fail("high_freq_hz above Nyquist");
  if (ms_to_samples(frame_len_ms, sample_rate) < 2) fail("frame shorter than 2 samples");
  if (ms_to_samples(hop_ms, sample_rate) < 1) fail("hop shorter than 1 sample");
  if (!(log_floor > 0.0)) fail("log_floor must be > 0");
}

std::size_t VadMask::count_kept() const {
  return static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
}

FeatureMatrix compute_mfcc(const AudioBuffer &audio, const MfccConfig &config) {
  const int rate = audio.sample_rate();
  config.validate(rate);
  const int frame_len = ms_to_samples(config.frame_len_ms, rate);
  const int hop = ms_to_samples(config.hop_ms, rate);
  if (audio.size() < static_cast<std::size_t>(frame_len))
    throw Error(ErrorCode::kSignalTooShort,
                std::to_string(audio.size()) + " samples < frame length " +
                    std::to_string(frame_len));
  const int fft_size = next_power_of_two(frame_len);
  const auto banks = make_mel_banks(config, rate, fft_size);
  const RealMatrix dct = make_dct(config.num_coeffs, config.num_mel_filters);
  const auto window = make_window(WindowKind::kHamming, frame_len);
  RealFft fft(fft_size);

  const std::size_t n = num_frames(audio.size(), frame_len, hop);
  FeatureMatrix out{RealMatrix(n, config.num_coeffs), {}, rate};
  out.frame_times.reserve(n);
  std::vector<double> frame(frame_len);
  std::vector<std::complex<double>> spec(fft.num_bins());
  std::vector<double> power(fft.num_bins());
  std::vector<double> log_mel(config.num_mel_filters);
  auto samples = audio.samples();
  for (std::size_t f = 0; f < n; ++f) {
    const std::size_t start = f * hop;
    out.frame_times.push_back(start);
    std::copy_n(samples.begin() + static_cast<std::ptrdiff_t>(start), frame_len, frame.begin());
    for (int i = frame_len - 1; i > 0; --i) frame[i] -= config.preemphasis * frame[i - 1];
    frame[0] -= config.preemphasis * frame[0];
    for (int i = 0; i < frame_len; ++i) frame[i] *= window[i];
    fft.forward(frame, spec);
    for (std::size_t k = 0; k < spec.size(); ++k) power[k] = std::norm(spec[k]);
    for (int m = 0; m < config.num_mel_filters; ++m) {
      const MelBank &b = banks[m];
      double e = 0.0;
      for (std::size_t i = 0; i < b.weights.size(); ++i)
        e += b.weights[i] * power[b.first_bin + i];
      log_mel[m] = std::log(std::max(e, config.log_floor));
    }
    auto row = out.rows.row(f);
    for (int j = 0; j < config.num_coeffs; ++j) {
      double acc = 0.0;
      for (int m = 0; m < config.num_mel_filters; ++m) acc += dct(j, m) * log_mel[m];
      row[j] = acc;
    }
  }
  return out;
}

FeatureMatrix sliding_mean_normalize(const FeatureMatrix &features, double window_ms) {
  if (!(window_ms > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "normalization window must be > 0 ms");
  FeatureMatrix out = features;
  const std::size_t n = features.num_frames();
  const std::size_t dim = features.num_coeffs();
  if (n == 0) return out;
  const auto half = static_cast<std::size_t>(
      std::max(0, ms_to_samples(window_ms, features.sample_rate)) / 2);
  const auto &t = features.frame_times;
  std::vector<double> mean(dim);
  std::size_t lo = 0, hi = 0;  // window is rows [lo, hi)
  for (std::size_t i = 0; i < n; ++i) {
    while (t[lo] + half < t[i]) ++lo;
    if (hi < i + 1) hi = i + 1;
    while (hi < n && t[hi] <= t[i] + half) ++hi;
    std::fill(mean.begin(), mean.end(), 0.0);
    for (std::size_t j = lo; j < hi; ++j) {
      auto r = features.rows.row(j);
      for (std::size_t d = 0; d < dim; ++d) mean[d] += r[d];
    }
    const double count = static_cast<double>(hi - lo);
    auto dst = out.rows.row(i);
    auto src = features.rows.row(i);
    for (std::size_t d = 0; d < dim; ++d) dst[d] = src[d] - mean[d] / count;
  }
  return out;
}

VadMask energy_vad(const AudioBuffer &audio, double frame_len_ms, double hop_ms,
                   double threshold_db) {
  const int rate = audio.sample_rate();
  const int frame_len = ms_to_samples(frame_len_ms, rate);
  const int hop = ms_to_samples(hop_ms, rate);
  if (frame_len < 1 || hop < 1)
    throw Error(ErrorCode::kInvalidArgument, "VAD frame length and hop must be >= 1 sample");
  if (!std::isfinite(threshold_db))
    throw Error(ErrorCode::kInvalidArgument, "VAD threshold must be finite");
  if (audio.size() < static_cast<std::size_t>(frame_len))
    throw Error(ErrorCode::kSignalTooShort,
                std::to_string(audio.size()) + " samples < frame length " +
                    std::to_string(frame_len));
  const std::size_t n = num_frames(audio.size(), frame_len, hop);
  auto samples = audio.samples();
  std::vector<double> energy(n), log_energy(n);
  double mean = 0.0;
  for (std::size_t f = 0; f < n; ++f) {
    double e = 0.0;
    for (int i = 0; i < frame_len; ++i) {
      const double x = samples[f * hop + i];
      e += x * x;
    }
    energy[f] = e;
    log_energy[f] = 10.0 * std::log10(std::max(e, kVadEnergyFloor));
    mean += log_energy[f];
  }
  mean /= static_cast<double>(n);
  VadMask mask;
  mask.keep.resize(n);
  for (std::size_t f = 0; f < n; ++f)
    mask.keep[f] = energy[f] > kVadEnergyFloor && log_energy[f] > mean + threshold_db;
  return mask;
}

FeatureMatrix apply_vad(const FeatureMatrix &features, const VadMask &mask) {
  if (mask.size() != features.num_frames())
    throw Error(ErrorCode::kLengthMismatch,
                "mask has " + std::to_string(mask.size()) + " frames, features have " +
                    std::to_string(features.num_frames()));
  FeatureMatrix out{RealMatrix(0, features.num_coeffs()), {}, features.sample_rate};
  for (std::size_t f = 0; f < features.num_frames(); ++f) {
    if (!mask.keep[f]) continue;
    out.rows.append_row(features.rows.row(f));
    out.frame_times.push_back(features.frame_times[f]);
  }
  return out;
}

std::vector<unsigned char> encode_features(const FeatureMatrix &features) {
  std::vector<unsigned char> out;
  out.reserve(8 + 4 * features.rows.data().size());
  put_u32(out, static_cast<std::uint32_t>(features.num_frames()));
  put_u32(out, static_cast<std::uint32_t>(features.num_coeffs()));
  for (double v : features.rows.data())
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

// Frame times are not part of the file format; decoded rows are numbered
// 0, 1, ... in their stored order.
FeatureMatrix decode_features(std::span<const unsigned char> bytes) {
  if (bytes.size() < 8)
    throw Error(ErrorCode::kMalformedHeader, "feature file shorter than its header");
  const std::uint32_t frames = get_u32(bytes.data());
  const std::uint32_t coeffs = get_u32(bytes.data() + 4);
  const std::uint64_t values = static_cast<std::uint64_t>(frames) * coeffs;
  if (bytes.size() != 8 + 4 * values)
    throw Error(ErrorCode::kMalformedHeader, "feature payload size does not match header");
  FeatureMatrix out{RealMatrix(frames, coeffs), {}, 16000};
  for (std::uint32_t f = 0; f < frames; ++f) {
    out.frame_times.push_back(f);
    for (std::uint32_t c = 0; c < coeffs; ++c) {
      const std::size_t off = 8 + 4 * (static_cast<std::size_t>(f) * coeffs + c);
      out.rows(f, c) = std::bit_cast<float>(get_u32(bytes.data() + off));
    }
  }
  return out;
}

void write_features(const std::filesystem::path &path, const FeatureMatrix &features) {
  write_file_atomic(path, encode_features(features));
}

FeatureMatrix read_features(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return decode_features(bytes);
}

}  // namespace tsmaug
