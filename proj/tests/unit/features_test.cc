// tests/unit/features_test.cc
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

#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "test_support.h"
#include "tsmaug/error.h"
#include "tsmaug/features.h"

namespace tsmaug {
namespace {

using testing::scaled;
using testing::sine;
using testing::speech_like;

AudioBuffer concat(const AudioBuffer &a, const AudioBuffer &b) {
  std::vector<double> x(a.samples().begin(), a.samples().end());
  x.insert(x.end(), b.samples().begin(), b.samples().end());
  return AudioBuffer(std::move(x), a.sample_rate());
}

AudioBuffer silence(std::size_t n) { return AudioBuffer(std::vector<double>(n, 0.0), 16000); }

TEST(Mfcc, OneSecondShape) {
  auto f = compute_mfcc(speech_like(16000, 1));
  EXPECT_EQ(f.num_frames(), 98u);
  EXPECT_EQ(f.num_coeffs(), 23u);
  ASSERT_EQ(f.frame_times.size(), 98u);
  EXPECT_EQ(f.frame_times[0], 0u);
  EXPECT_EQ(f.frame_times[97], 97u * 160);
  for (double v : f.rows.data()) ASSERT_TRUE(std::isfinite(v));
}

TEST(Mfcc, DigitalSilenceRowsIdentical) {
  auto f = compute_mfcc(silence(8000));
  for (std::size_t r = 1; r < f.num_frames(); ++r)
    for (std::size_t c = 0; c < f.num_coeffs(); ++c) ASSERT_EQ(f.rows(r, c), f.rows(0, c));
  // log floor in every filter projects onto c0 only.
  EXPECT_NEAR(f.rows(0, 0), std::log(1e-10) * std::sqrt(23.0), 1e-9);
  for (std::size_t c = 1; c < f.num_coeffs(); ++c) EXPECT_NEAR(f.rows(0, c), 0.0, 1e-9);
}

TEST(Mfcc, GainOnlyMovesC0) {
  auto x = speech_like(16000, 5);
  auto a = compute_mfcc(x);
  auto b = compute_mfcc(scaled(x, 0.5));
  const double offset = std::log(0.25) * std::sqrt(23.0);
  for (std::size_t r = 0; r < a.num_frames(); ++r) {
    EXPECT_NEAR(b.rows(r, 0) - a.rows(r, 0), offset, 1e-6);
    for (std::size_t c = 1; c < a.num_coeffs(); ++c) ASSERT_NEAR(b.rows(r, c), a.rows(r, c), 1e-6);
  }
}

// With as many coefficients as filters the orthonormal DCT is invertible, so
// the log-mel energies can be recovered and checked against the tone.
TEST(Mfcc, ToneEnergyLandsInMatchingMelFilter) {
  auto f = compute_mfcc(sine(1000.0, 0.5));
  const int m = 23;
  std::vector<double> log_mel(m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double scale = j == 0 ? std::sqrt(1.0 / m) : std::sqrt(2.0 / m);
      log_mel[i] += scale * std::cos(std::numbers::pi * j * (i + 0.5) / m) * f.rows(10, j);
    }
  const int best = static_cast<int>(std::max_element(log_mel.begin(), log_mel.end()) - log_mel.begin());
  const double step = (hz_to_mel(7600) - hz_to_mel(20)) / (m + 1);
  const double center_hz = mel_to_hz(hz_to_mel(20) + (best + 1) * step);
  EXPECT_LT(std::abs(hz_to_mel(center_hz) - hz_to_mel(1000.0)), step);
}

TEST(Mfcc, ConfigErrors) {
  auto x = speech_like(4000, 1);
  MfccConfig c;
  c.num_coeffs = 24;
  EXPECT_THROW(compute_mfcc(x, c), Error);
  c = {};
  c.high_freq_hz = 8001;
  EXPECT_THROW(compute_mfcc(x, c), Error);
  c = {};
  c.low_freq_hz = 8000;
  c.high_freq_hz = 7000;
  EXPECT_THROW(compute_mfcc(x, c), Error);
  try {
    compute_mfcc(silence(399));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kSignalTooShort);
  }
}

FeatureMatrix constant_features(std::size_t rows, double v) {
  FeatureMatrix f{RealMatrix(rows, 4, v), {}, 16000};
  for (std::size_t i = 0; i < rows; ++i) f.frame_times.push_back(i * 160);
  return f;
}

TEST(SlidingMean, ConstantBecomesZero) {
  auto out = sliding_mean_normalize(constant_features(500, 3.25));
  for (double v : out.rows.data()) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(SlidingMean, SingleRowBecomesZero) {
  FeatureMatrix f{RealMatrix(1, 3), {0}, 16000};
  f.rows(0, 0) = 1.5;
  f.rows(0, 1) = -2;
  f.rows(0, 2) = 7;
  const auto out = sliding_mean_normalize(f);
  for (double v : out.rows.data()) EXPECT_EQ(v, 0.0);
}

TEST(SlidingMean, RemovesGainOffset) {
  auto x = speech_like(48000, 6);
  auto a = sliding_mean_normalize(compute_mfcc(x));
  auto b = sliding_mean_normalize(compute_mfcc(scaled(x, 0.5)));
  for (std::size_t i = 0; i < a.rows.data().size(); ++i)
    ASSERT_NEAR(a.rows.data()[i], b.rows.data()[i], 1e-6);
}

TEST(SlidingMean, MatchesBruteForceWindow) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  FeatureMatrix f{RealMatrix(700, 5), {}, 16000};
  std::size_t t = 0;
  for (std::size_t r = 0; r < 700; ++r) {
    t += 160 * std::uniform_int_distribution<std::size_t>(1, 3)(rng);  // gaps, as after VAD
    f.frame_times.push_back(t);
    for (std::size_t c = 0; c < 5; ++c) f.rows(r, c) = nd(rng);
  }
  auto out = sliding_mean_normalize(f, 3000.0);
  const std::size_t half = 24000;
  for (std::size_t i = 0; i < 700; ++i) {
    for (std::size_t c = 0; c < 5; ++c) {
      double sum = 0.0;
      int n = 0;
      for (std::size_t j = 0; j < 700; ++j) {
        const auto d = f.frame_times[j] > f.frame_times[i] ? f.frame_times[j] - f.frame_times[i]
                                                           : f.frame_times[i] - f.frame_times[j];
        if (d <= half) {
          sum += f.rows(j, c);
          ++n;
        }
      }
      ASSERT_NEAR(out.rows(i, c), f.rows(i, c) - sum / n, 1e-12);
    }
  }
}

TEST(SlidingMean, IdempotentWithFullUtteranceWindow) {
  auto f = compute_mfcc(speech_like(32000, 4));
  auto once = sliding_mean_normalize(f, 10000.0);
  auto twice = sliding_mean_normalize(once, 10000.0);
  for (std::size_t i = 0; i < once.rows.data().size(); ++i)
    ASSERT_NEAR(once.rows.data()[i], twice.rows.data()[i], 1e-9);
}

TEST(EnergyVad, SilenceDropsEverything) {
  auto m = energy_vad(silence(16000));
  EXPECT_EQ(m.size(), 98u);
  EXPECT_EQ(m.count_kept(), 0u);
}

TEST(EnergyVad, SteadyToneKeepsEverything) {
  std::vector<double> x(16000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i % 2) ? 1.0 : -1.0;
  auto m = energy_vad(AudioBuffer(x, 16000));
  EXPECT_EQ(m.count_kept(), m.size());
  EXPECT_EQ(energy_vad(sine(300, 1.0, 0.99)).count_kept(), 98u);
}

TEST(EnergyVad, SilenceThenToneKeepsToneFrames) {
  const std::size_t onset = 8000, frame = 400, hop = 160;
  auto a = concat(silence(onset), sine(440.0, 0.5, 0.9));
  auto m = energy_vad(a);
  ASSERT_EQ(m.size(), 98u);
  // Arithmetic oracle: the first frame containing any tone samples, and the
  // first frame whose center is inside the tone.
  const std::size_t first_overlap = (onset - frame) / hop + 1;
  std::size_t first_centered = 0;
  while (first_centered * hop + frame / 2 < onset) ++first_centered;
  ASSERT_EQ(first_overlap, 48u);
  ASSERT_EQ(first_centered, 49u);
  for (std::size_t f = 0; f < m.size(); ++f) EXPECT_EQ(m.keep[f], f >= first_overlap) << f;
  EXPECT_LE(first_centered - first_overlap, 1u);
}

TEST(EnergyVad, TooShort) {
  try {
    energy_vad(silence(100));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kSignalTooShort);
  }
}

TEST(ApplyVad, Masks) {
  auto f = constant_features(3, 0.0);
  for (std::size_t r = 0; r < 3; ++r) f.rows(r, 0) = static_cast<double>(r);
  auto all = apply_vad(f, VadMask{{true, true, true}});
  EXPECT_EQ(all.rows, f.rows);
  EXPECT_EQ(all.frame_times, f.frame_times);
  auto none = apply_vad(f, VadMask{{false, false, false}});
  EXPECT_EQ(none.num_frames(), 0u);
  auto some = apply_vad(f, VadMask{{true, false, true}});
  ASSERT_EQ(some.num_frames(), 2u);
  EXPECT_EQ(some.rows(0, 0), 0.0);
  EXPECT_EQ(some.rows(1, 0), 2.0);
  EXPECT_EQ(some.frame_times[1], 320u);
  try {
    apply_vad(f, VadMask{{true}});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(FeaturePipeline, GainInvarianceProperty) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> gain(0.05, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = speech_like(std::uniform_int_distribution<std::size_t>(8000, 48000)(rng), rng());
    auto y = scaled(x, gain(rng));
    auto mx = energy_vad(x), my = energy_vad(y);
    ASSERT_EQ(mx.keep, my.keep);
    auto fx = sliding_mean_normalize(apply_vad(compute_mfcc(x), mx));
    auto fy = sliding_mean_normalize(apply_vad(compute_mfcc(y), my));
    ASSERT_EQ(fx.num_frames(), fy.num_frames());
    for (std::size_t i = 0; i < fx.rows.data().size(); ++i)
      ASSERT_NEAR(fx.rows.data()[i], fy.rows.data()[i], 1e-6);
  }
}

TEST(FeaturePipeline, FrameCountsAgree) {
  for (std::size_t n : {400u, 401u, 559u, 560u, 16000u, 33333u})
    EXPECT_EQ(compute_mfcc(speech_like(n, n)).num_frames(), energy_vad(speech_like(n, n)).size());
}

TEST(FeatureFile, LayoutAndRoundTrip) {
  auto f = compute_mfcc(speech_like(4000, 2));
  auto bytes = encode_features(f);
  ASSERT_EQ(bytes.size(), 8 + 4 * f.num_frames() * 23);
  EXPECT_EQ(bytes[0], f.num_frames());
  EXPECT_EQ(bytes[4], 23);
  EXPECT_EQ(bytes[1] | bytes[2] | bytes[3] | bytes[5] | bytes[6] | bytes[7], 0);
  testing::TempDir dir("feats");
  write_features(dir / "u.feats", f);
  auto back = read_features(dir / "u.feats");
  ASSERT_EQ(back.num_frames(), f.num_frames());
  ASSERT_EQ(back.num_coeffs(), f.num_coeffs());
  for (std::size_t i = 0; i < f.rows.data().size(); ++i)
    EXPECT_EQ(back.rows.data()[i], static_cast<float>(f.rows.data()[i]));
  EXPECT_THROW(decode_features(std::span(bytes).first(bytes.size() - 1)), Error);
}

}  // namespace
}  // namespace tsmaug
