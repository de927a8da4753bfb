// tools/cli.cc
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

#include "cli.h"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "tsmaug/audio-io.h"
#include "tsmaug/augment.h"
#include "tsmaug/error.h"
#include "tsmaug/features.h"
#include "tsmaug/parallel.h"
#include "tsmaug/rtisi.h"

namespace tsmaug::cli {

namespace {

namespace fs = std::filesystem;

// Raised for anything the user must fix on the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<TsmRate> parse_rates(const std::string &text) {
  std::vector<TsmRate> rates;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception &) {
      throw UsageError("bad rate '" + item + "'");
    }
    if (used != item.size()) throw UsageError("bad rate '" + item + "'");
    try {
      rates.emplace_back(v);
    } catch (const Error &e) {
      throw UsageError(e.what());
    }
  }
  if (rates.empty()) throw UsageError("--rates must list at least one rate");
  return rates;
}

BalancePlan plan_or_usage(const std::vector<UtteranceRecord> &manifest,
                          const std::vector<TsmRate> &rates, const std::string &target) {
  try {
    return build_balance_plan(manifest, rates,
                              target.empty() ? BalanceMode::min_class()
                                             : BalanceMode::explicit_label(target));
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kEmptyManifest) throw;
    throw UsageError(e.what());
  }
}

void print_histograms(std::ostream &out, const BalancePlan &plan) {
  ClassHistogram before;
  for (const auto &a : plan.assignments) ++before[a.record.label];
  const ClassHistogram after = planned_histogram(plan);
  out << "target=" << plan.target_class << "\n";
  std::size_t total_before = 0, total_after = 0;
  for (const auto &[label, count] : before) {
    out << label << " " << count << " -> " << after.at(label) << "\n";
    total_before += count;
    total_after += after.at(label);
  }
  out << "total " << total_before << " -> " << total_after << "\n";
}

int report_failures(std::ostream &err, const std::vector<FileFailure> &failures) {
  for (const auto &f : failures) err << "error: " << f.utt_id << ": " << f.message << "\n";
  return failures.empty() ? kExitOk : kExitProcessing;
}

struct Options {
  // tsm
  std::optional<double> alpha;
  std::optional<double> analysis_hop_ms;
  int iterations = kDefaultIterations;
  std::string in_path, out_path;
  // batch
  std::string manifest;
  std::string out_dir;
  std::string rates = "0.8,0.9,1.1,1.2";
  std::string target;
  int jobs = 1;
  std::uint64_t seed = 0;
  // featurize / vad
  bool no_vad = false;
  bool no_norm = false;
  double vad_threshold_db = kDefaultVadThresholdDb;
  double norm_window_ms = 3000.0;
  // mix / reverb
  std::string noise_manifest;
  std::string rir_manifest;
  std::optional<double> snr_db;
};

int cmd_tsm(const Options &o, std::ostream &out) {
  if (o.alpha.has_value() == o.analysis_hop_ms.has_value())
    throw UsageError("give exactly one of --alpha or --analysis-hop-ms");
  std::optional<TsmRate> rate;
  try {
    rate = o.alpha ? TsmRate(*o.alpha) : compute_rate(*o.analysis_hop_ms, kSynthesisHopMs);
  } catch (const Error &e) {
    throw UsageError(e.what());
  }
  const AudioBuffer in = read_wav(o.in_path);
  const AudioBuffer result = time_scale(in, *rate, o.iterations);
  write_wav(o.out_path, result);
  out << "alpha=" << format_value(rate->alpha()) << " in=" << in.size()
      << " out=" << result.size() << "\n";
  return kExitOk;
}

int cmd_balance_plan(const Options &o, std::ostream &out) {
  const auto rates = parse_rates(o.rates);
  const auto manifest = parse_manifest(o.manifest);
  print_histograms(out, plan_or_usage(manifest, rates, o.target));
  return kExitOk;
}

int cmd_augment(const Options &o, std::ostream &out, std::ostream &err) {
  const auto rates = parse_rates(o.rates);
  const auto manifest = parse_manifest(o.manifest);
  const BalancePlan plan = plan_or_usage(manifest, rates, o.target);
  ExecuteOptions opts;
  opts.iterations = o.iterations;
  opts.jobs = o.jobs;
  const ExecutionResult result = execute_plan(plan, o.out_dir, opts);
  fs::create_directories(o.out_dir);
  write_manifest(fs::path(o.out_dir) / "augmented.tsv", result.records);
  print_histograms(out, plan);
  out << "wrote " << result.records.size() << " records to "
      << (fs::path(o.out_dir) / "augmented.tsv").string() << "\n";
  return report_failures(err, result.failures);
}

int cmd_featurize(const Options &o, std::ostream &out, std::ostream &err) {
  const auto manifest = parse_manifest(o.manifest);
  fs::create_directories(o.out_dir);
  struct Item {
    std::size_t frames = 0, dims = 0;
    std::optional<std::string> error;
    fs::path path;
  };
  std::vector<Item> items(manifest.size());
  const MfccConfig config;
  auto work = [&](std::size_t i) {
    const auto &r = manifest[i];
    try {
      const AudioBuffer audio = read_wav(r.path);
      FeatureMatrix feats = compute_mfcc(audio, config);
      if (!o.no_vad)
        feats = apply_vad(feats, energy_vad(audio, config.frame_len_ms, config.hop_ms,
                                           o.vad_threshold_db));
      if (!o.no_norm) feats = sliding_mean_normalize(feats, o.norm_window_ms);
      items[i].path = fs::path(o.out_dir) / (r.utt_id + ".feats");
      write_features(items[i].path, feats);
      items[i].frames = feats.num_frames();
      items[i].dims = feats.num_coeffs();
    } catch (const std::exception &e) {
      items[i].error = e.what();
    }
  };
  parallel_for(manifest.size(), o.jobs, work);
  std::vector<UtteranceRecord> written;
  std::vector<FileFailure> failures;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const auto &r = manifest[i];
    if (items[i].error) {
      failures.push_back({r.utt_id, *items[i].error});
      continue;
    }
    out << r.utt_id << " frames=" << items[i].frames << " dims=" << items[i].dims << "\n";
    if (items[i].frames == 0) err << "warning: " << r.utt_id << ": no frames retained\n";
    written.push_back({r.utt_id, items[i].path, r.label});
  }
  write_manifest(fs::path(o.out_dir) / "features.tsv", written);
  return report_failures(err, failures);
}

int cmd_vad(const Options &o, std::ostream &out) {
  const AudioBuffer audio = read_wav(o.in_path);
  const VadMask mask = energy_vad(audio, kFrameMs, kSynthesisHopMs, o.vad_threshold_db);
  out << "frames=" << mask.size() << " kept=" << mask.count_kept() << "\n";
  std::string bits;
  for (bool k : mask.keep) bits += k ? '1' : '0';
  out << bits << "\n";
  return kExitOk;
}

int cmd_mix(const Options &o, std::ostream &out, std::ostream &err) {
  if (!o.snr_db) throw UsageError("--snr-db is required");
  const auto manifest = parse_manifest(o.manifest);
  const auto noises = parse_manifest(o.noise_manifest);
  const auto result = execute_noise_mix(manifest, noises, *o.snr_db, o.out_dir, o.seed, o.jobs);
  write_manifest(fs::path(o.out_dir) / "noisy.tsv", result.records);
  out << "wrote " << result.records.size() << " records to "
      << (fs::path(o.out_dir) / "noisy.tsv").string() << "\n";
  return report_failures(err, result.failures);
}

int cmd_reverb(const Options &o, std::ostream &out, std::ostream &err) {
  const auto manifest = parse_manifest(o.manifest);
  const auto rirs = parse_manifest(o.rir_manifest);
  const auto result = execute_reverb(manifest, rirs, o.out_dir, o.seed, o.jobs);
  write_manifest(fs::path(o.out_dir) / "reverb.tsv", result.records);
  out << "wrote " << result.records.size() << " records to "
      << (fs::path(o.out_dir) / "reverb.tsv").string() << "\n";
  return report_failures(err, result.failures);
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Time-scale modification and speech data augmentation"};
  app.require_subcommand(1);
  Options o;

  auto *tsm = app.add_subcommand("tsm", "Time-scale one WAV file (synthesis hop fixed at 10 ms)");
  auto *alpha = tsm->add_option("--alpha", o.alpha, "Speech-rate factor Sa/Ss in [0.5, 2]");
  tsm->add_option("--analysis-hop-ms", o.analysis_hop_ms, "Analysis step size in ms")
      ->excludes(alpha);
  tsm->add_option("--iterations", o.iterations, "Phase refinements per frame")
      ->check(CLI::PositiveNumber);
  tsm->add_option("input", o.in_path, "Input WAV")->required();
  tsm->add_option("output", o.out_path, "Output WAV")->required();

  auto add_rates = [&](CLI::App *cmd) {
    cmd->add_option("--rates", o.rates, "Comma-separated rates, 1.0 excluded")
        ->capture_default_str();
    cmd->add_option("--target", o.target, "Class to expand (default: smallest class)");
  };
  auto *plan = app.add_subcommand("balance-plan", "Print the class-balance plan");
  add_rates(plan);
  plan->add_option("manifest", o.manifest, "Input manifest (TSV)")->required();

  auto *augment = app.add_subcommand("augment", "Speed-perturb the target class");
  add_rates(augment);
  augment->add_option("--iterations", o.iterations, "Phase refinements per frame")
      ->check(CLI::PositiveNumber);
  augment->add_option("--jobs", o.jobs, "Utterances processed in parallel")
      ->check(CLI::PositiveNumber);
  augment->add_option("manifest", o.manifest, "Input manifest (TSV)")->required();
  augment->add_option("out_dir", o.out_dir, "Output directory")->required();

  auto *featurize = app.add_subcommand("featurize", "MFCC + VAD + sliding mean normalization");
  featurize->add_flag("--no-vad", o.no_vad, "Keep all frames");
  featurize->add_flag("--no-norm", o.no_norm, "Skip mean normalization");
  featurize->add_option("--vad-threshold-db", o.vad_threshold_db,
                        "Frame kept above mean log energy + threshold")
      ->capture_default_str();
  featurize->add_option("--norm-window-ms", o.norm_window_ms, "Centered normalization window")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  featurize->add_option("--jobs", o.jobs, "Utterances processed in parallel")
      ->check(CLI::PositiveNumber);
  featurize->add_option("manifest", o.manifest, "Input manifest (TSV)")->required();
  featurize->add_option("out_dir", o.out_dir, "Output directory")->required();

  auto *vad = app.add_subcommand("vad", "Print the energy VAD mask of one WAV file");
  vad->add_option("--threshold-db", o.vad_threshold_db, "Relative threshold in dB")
      ->capture_default_str();
  vad->add_option("input", o.in_path, "Input WAV")->required();

  auto *mix = app.add_subcommand("mix", "Add noise at a fixed SNR");
  mix->add_option("--noise-manifest", o.noise_manifest, "Noise manifest (TSV)")->required();
  mix->add_option("--snr-db", o.snr_db, "Target SNR in dB")->required();
  mix->add_option("--seed", o.seed, "Seed for noise selection")->capture_default_str();
  mix->add_option("--jobs", o.jobs, "Utterances processed in parallel")
      ->check(CLI::PositiveNumber);
  mix->add_option("manifest", o.manifest, "Input manifest (TSV)")->required();
  mix->add_option("out_dir", o.out_dir, "Output directory")->required();

  auto *reverb = app.add_subcommand("reverb", "Convolve with room impulse responses");
  reverb->add_option("--rir-manifest", o.rir_manifest, "RIR manifest (TSV)")->required();
  reverb->add_option("--seed", o.seed, "Seed for RIR selection")->capture_default_str();
  reverb->add_option("--jobs", o.jobs, "Utterances processed in parallel")
      ->check(CLI::PositiveNumber);
  reverb->add_option("manifest", o.manifest, "Input manifest (TSV)")->required();
  reverb->add_option("out_dir", o.out_dir, "Output directory")->required();

  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (tsm->parsed()) return cmd_tsm(o, out);
    if (plan->parsed()) return cmd_balance_plan(o, out);
    if (augment->parsed()) return cmd_augment(o, out, err);
    if (featurize->parsed()) return cmd_featurize(o, out, err);
    if (vad->parsed()) return cmd_vad(o, out);
    if (mix->parsed()) return cmd_mix(o, out, err);
    if (reverb->parsed()) return cmd_reverb(o, out, err);
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitProcessing;
  }
  return kExitUsage;
}

}  // namespace tsmaug::cli
