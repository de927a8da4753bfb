// tests/unit/cli_test.cc
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

#include <fstream>
#include <sstream>

#include "cli.h"
#include "test_support.h"
#include "tsmaug/audio-io.h"
#include "tsmaug/features.h"

namespace tsmaug {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "tsmaug");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  TempDir dir{"cli"};

  std::string wav(const std::string &name, const AudioBuffer &a) {
    const auto p = dir / name;
    write_wav(p, a);
    return p.string();
  }
  std::string manifest(const std::string &name, const std::vector<UtteranceRecord> &recs) {
    const auto p = dir / name;
    write_manifest(p, recs);
    return p.string();
  }
};

TEST_F(CliTest, TsmSlowDown) {
  const auto in = wav("in.wav", testing::speech_like(16000, 1));
  const auto out = (dir / "out.wav").string();
  auto r = run({"tsm", "--alpha", "0.8", in, out});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto n = read_wav(out).size();
  EXPECT_NEAR(static_cast<double>(n), 20000.0, 400.0);
  EXPECT_EQ(r.out, "alpha=0.8 in=16000 out=" + std::to_string(n) + "\n");
}

TEST_F(CliTest, TsmRejectsOutOfRangeBeforeWriting) {
  const auto in = wav("in.wav", testing::speech_like(16000, 1));
  const auto out = dir / "out.wav";
  EXPECT_EQ(run({"tsm", "--alpha", "3.0", in, out.string()}).code, 2);
  EXPECT_EQ(run({"tsm", "--analysis-hop-ms", "25", in, out.string()}).code, 2);
  EXPECT_EQ(run({"tsm", in, out.string()}).code, 2);
  EXPECT_EQ(run({"tsm", "--alpha", "1.2", "--analysis-hop-ms", "12", in, out.string()}).code, 2);
  EXPECT_EQ(run({"tsm", "--alpha", "abc", in, out.string()}).code, 2);
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, TsmAnalysisHopMatchesAlpha) {
  const auto in = wav("in.wav", testing::speech_like(12000, 2));
  auto a = run({"tsm", "--analysis-hop-ms", "12", in, (dir / "a.wav").string()});
  auto b = run({"tsm", "--alpha", "1.2", in, (dir / "b.wav").string()});
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("alpha=1.2 ", 0), 0u);
  EXPECT_EQ(slurp(dir / "a.wav"), slurp(dir / "b.wav"));
}

TEST_F(CliTest, TsmProcessingErrorLeavesNoFile) {
  auto r = run({"tsm", "--alpha", "0.9", (dir / "missing.wav").string(), (dir / "o.wav").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(fs::exists(dir / "o.wav"));
  EXPECT_FALSE(fs::exists(dir / "o.wav.tmp"));
  const auto shortie = wav("short.wav", AudioBuffer(std::vector<double>(100, 0.1), 16000));
  EXPECT_EQ(run({"tsm", "--alpha", "0.9", shortie, (dir / "o.wav").string()}).code, 1);
  EXPECT_FALSE(fs::exists(dir / "o.wav"));
}

TEST_F(CliTest, BalancePlanReportsFiveFoldJor) {
  std::vector<UtteranceRecord> recs;
  for (int i = 0; i < 5514; ++i) recs.push_back({"jor" + std::to_string(i), "j.wav", "JOR"});
  for (int i = 0; i < 9000; ++i) recs.push_back({"ira" + std::to_string(i), "i.wav", "IRA"});
  const auto m = manifest("m.tsv", recs);
  auto r = run({"balance-plan", "--rates", "0.8,0.9,1.1,1.2", m});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("target=JOR\n"), std::string::npos);
  EXPECT_NE(r.out.find("JOR 5514 -> 27570\n"), std::string::npos);
  EXPECT_NE(r.out.find("IRA 9000 -> 9000\n"), std::string::npos);
}

TEST_F(CliTest, BalancePlanFlagErrors) {
  const auto m = manifest("m.tsv", {{"a", "a.wav", "A"}});
  EXPECT_EQ(run({"balance-plan", "--rates", "", m}).code, 2);
  EXPECT_EQ(run({"balance-plan", "--rates", "0.9,1.0", m}).code, 2);
  EXPECT_EQ(run({"balance-plan", "--rates", "0.9", "--target", "ZZZ", m}).code, 2);
  EXPECT_EQ(run({"balance-plan", (dir / "nope.tsv").string()}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST_F(CliTest, AugmentSingleClassAndDeterminism) {
  std::vector<UtteranceRecord> recs;
  for (int i = 0; i < 3; ++i) {
    const std::string id = "u" + std::to_string(i);
    recs.push_back({id, wav(id + ".wav", testing::speech_like(8000 + 1000 * i, i)), "JOR"});
  }
  const auto m = manifest("m.tsv", recs);
  const auto out = (dir / "aug").string();
  auto r1 = run({"augment", "--rates", "0.9,1.1", m, out});
  ASSERT_EQ(r1.code, 0) << r1.err;
  EXPECT_NE(r1.out.find("JOR 3 -> 9\n"), std::string::npos);
  const auto tsv1 = slurp(dir / "aug" / "augmented.tsv");
  const auto wav1 = slurp(dir / "aug" / "u1_sp1.1.wav");
  auto r2 = run({"augment", "--rates", "1.1,0.9", "--jobs", "3", m, out});
  ASSERT_EQ(r2.code, 0);
  EXPECT_EQ(r1.out, r2.out);
  EXPECT_EQ(tsv1, slurp(dir / "aug" / "augmented.tsv"));
  EXPECT_EQ(wav1, slurp(dir / "aug" / "u1_sp1.1.wav"));
  EXPECT_EQ(parse_manifest(dir / "aug" / "augmented.tsv").size(), 9u);
  EXPECT_EQ(run({"augment", "--rates", "", m, out}).code, 2);
}

TEST_F(CliTest, AugmentReportsPerFileFailures) {
  const auto m = manifest("m.tsv", {{"ok", wav("ok.wav", testing::speech_like(6000, 1)), "A"},
                                    {"bad", (dir / "absent.wav").string(), "A"},
                                    {"other", "x.wav", "B"}, {"other2", "y.wav", "B"}});
  auto r = run({"augment", "--rates", "0.9", m, (dir / "aug").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad"), std::string::npos);
  EXPECT_EQ(parse_manifest(dir / "aug" / "augmented.tsv").size(), 5u);
}

TEST_F(CliTest, FeaturizeCountsFrames) {
  const auto m = manifest("m.tsv", {{"speech", wav("s.wav", testing::speech_like(16000, 3)), "A"},
                                    {"quiet", wav("q.wav", AudioBuffer(std::vector<double>(16000, 0.0), 16000)), "B"}});
  auto r = run({"featurize", m, (dir / "f").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto speech = read_features(dir / "f" / "speech.feats");
  EXPECT_LE(speech.num_frames(), 98u);
  EXPECT_GT(speech.num_frames(), 0u);
  EXPECT_EQ(speech.num_coeffs(), 23u);
  EXPECT_EQ(read_features(dir / "f" / "quiet.feats").num_frames(), 0u);
  EXPECT_NE(r.err.find("warning: quiet"), std::string::npos);
  EXPECT_NE(r.out.find("quiet frames=0 dims=23\n"), std::string::npos);

  auto raw = run({"featurize", "--no-vad", "--no-norm", "--jobs", "2", m, (dir / "raw").string()});
  ASSERT_EQ(raw.code, 0);
  EXPECT_EQ(read_features(dir / "raw" / "speech.feats").num_frames(), 98u);
  EXPECT_EQ(read_features(dir / "raw" / "quiet.feats").num_frames(), 98u);
  EXPECT_EQ(parse_manifest(dir / "raw" / "features.tsv").size(), 2u);
}

TEST_F(CliTest, VadPrintsMask) {
  std::vector<double> x(16000, 0.0);
  for (std::size_t i = 8000; i < x.size(); ++i) x[i] = (i % 2) ? 0.5 : -0.5;
  auto r = run({"vad", wav("v.wav", AudioBuffer(x, 16000))});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "frames=98 kept=50\n" + std::string(48, '0') + std::string(50, '1') + "\n");
}

TEST_F(CliTest, MixAndReverb) {
  const auto m = manifest("m.tsv", {{"a", wav("a.wav", testing::speech_like(5000, 1)), "A"},
                                    {"b", wav("b.wav", testing::speech_like(5000, 2)), "B"}});
  const auto n = manifest("n.tsv", {{"n0", wav("n0.wav", testing::white_noise(2000, 3)), "noise"}});
  const auto rir = manifest("r.tsv", {{"r0", wav("r0.wav", AudioBuffer({1.0, 0.0, 0.3}, 16000)), "rir"}});
  EXPECT_EQ(run({"mix", "--noise-manifest", n, m, (dir / "mix").string()}).code, 2);
  auto mix = run({"mix", "--noise-manifest", n, "--snr-db", "10", "--seed", "3", m, (dir / "mix").string()});
  ASSERT_EQ(mix.code, 0) << mix.err;
  auto noisy = parse_manifest(dir / "mix" / "noisy.tsv");
  ASSERT_EQ(noisy.size(), 2u);
  EXPECT_EQ(noisy[0].utt_id, "a_noise10");
  auto rev = run({"reverb", "--rir-manifest", rir, m, (dir / "rev").string()});
  ASSERT_EQ(rev.code, 0) << rev.err;
  EXPECT_TRUE(fs::exists(dir / "rev" / "b_reverb.wav"));
}

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"tsm", "--help"}).code, 0);
}

}  // namespace
}  // namespace tsmaug
