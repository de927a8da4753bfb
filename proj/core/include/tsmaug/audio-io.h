// core/include/tsmaug/audio-io.h
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

#ifndef TSMAUG_AUDIO_IO_H_
#define TSMAUG_AUDIO_IO_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tsmaug {

/// Mono PCM signal. Samples are nominally in [-1, 1] but the buffer does not
/// enforce the range; write_wav clips on quantization.
class AudioBuffer {
 public:
  AudioBuffer() = default;
  /// Throws Error(kInvalidArgument) on non-positive rate or non-finite samples.
  AudioBuffer(std::vector<double> samples, int sample_rate);

  std::span<const double> samples() const { return samples_; }
  std::vector<double> &mutable_samples() { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double operator[](std::size_t i) const { return samples_[i]; }

  double duration_seconds() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

 private:
  std::vector<double> samples_;
  int sample_rate_ = 16000;
};

struct UtteranceRecord {
  std::string utt_id;
  std::filesystem::path path;
  std::string label;

  bool operator==(const UtteranceRecord &) const = default;
};

/// Reads a RIFF/WAVE file holding 16-bit mono PCM. Unknown chunks are
/// skipped. Samples are int16 / 32768.
AudioBuffer read_wav(const std::filesystem::path &path);

/// Writes 16-bit mono PCM. Samples are clipped to [-1, 1] and quantized as
/// round(x * 32768) saturated to the int16 range.
void write_wav(const std::filesystem::path &path, const AudioBuffer &audio);

/// In-memory variants of the above, used by the file functions.
AudioBuffer decode_wav(std::span<const unsigned char> bytes);
std::vector<unsigned char> encode_wav(const AudioBuffer &audio);

/// Writes `bytes` to `path` through a sibling temporary file and a rename,
/// so readers never observe a truncated file.
void write_file_atomic(const std::filesystem::path &path,
                       std::span<const unsigned char> bytes);

/// One record per line: utt_id<TAB>path<TAB>label. Blank lines and lines
/// starting with '#' are skipped.
std::vector<UtteranceRecord> parse_manifest(const std::filesystem::path &path);
std::vector<UtteranceRecord> parse_manifest_text(const std::string &text);

std::string format_manifest(const std::vector<UtteranceRecord> &records);
void write_manifest(const std::filesystem::path &path,
                    const std::vector<UtteranceRecord> &records);

}  // namespace tsmaug

#endif  // TSMAUG_AUDIO_IO_H_
