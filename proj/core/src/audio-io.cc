// core/src/audio-io.cc
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

#include "tsmaug/audio-io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <system_error>
#include <unordered_set>

#include "tsmaug/error.h"

namespace tsmaug {

namespace {

constexpr std::uint16_t kFormatPcm = 1;

std::uint32_t read_u32(const unsigned char *p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<unsigned char> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_u16(std::vector<unsigned char> &out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_tag(std::vector<unsigned char> &out, const char *tag) {
  out.insert(out.end(), tag, tag + 4);
}

bool tag_is(const unsigned char *p, const char *tag) {
  return std::memcmp(p, tag, 4) == 0;
}

std::int16_t quantize(double x) {
  x = std::clamp(x, -1.0, 1.0);
  double q = std::round(x * 32768.0);
  q = std::clamp(q, -32768.0, 32767.0);
  return static_cast<std::int16_t>(q);
}

std::string trim_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

AudioBuffer::AudioBuffer(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0)
    throw Error(ErrorCode::kInvalidArgument,
                "sample rate must be positive, got " + std::to_string(sample_rate_));
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i]))
      throw Error(ErrorCode::kInvalidArgument,
                  "non-finite sample at index " + std::to_string(i));
  }
}

AudioBuffer decode_wav(std::span<const unsigned char> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes.data(), "RIFF") ||
      !tag_is(bytes.data() + 8, "WAVE"))
    throw Error(ErrorCode::kMalformedHeader, "missing RIFF/WAVE signature");

  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char *chunk = bytes.data() + pos;
    std::uint32_t size = read_u32(chunk + 4);
    std::size_t body = pos + 8;
    if (tag_is(chunk, "fmt ")) {
      if (size < 16 || body + size > bytes.size())
        throw Error(ErrorCode::kMalformedHeader, "truncated fmt chunk");
      std::uint16_t format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      if (format != kFormatPcm)
        throw Error(ErrorCode::kUnsupportedFormat,
                    "audio format tag " + std::to_string(format) + " is not PCM");
      if (channels != 1)
        throw Error(ErrorCode::kUnsupportedFormat,
                    std::to_string(channels) + " channels; only mono is supported");
      if (bits != 16)
        throw Error(ErrorCode::kUnsupportedFormat,
                    std::to_string(bits) + "-bit samples; only 16-bit is supported");
      if (rate == 0)
        throw Error(ErrorCode::kMalformedHeader, "zero sample rate");
      have_fmt = true;
    } else if (tag_is(chunk, "data")) {
      if (!have_fmt)
        throw Error(ErrorCode::kMalformedHeader, "data chunk before fmt chunk");
      if (body + size > bytes.size() || size % 2 != 0)
        throw Error(ErrorCode::kMalformedHeader, "truncated data chunk");
      std::vector<double> samples(size / 2);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        auto raw = static_cast<std::int16_t>(read_u16(bytes.data() + body + 2 * i));
        samples[i] = raw / 32768.0;
      }
      return AudioBuffer(std::move(samples), static_cast<int>(rate));
    }
    // Chunks are word aligned.
    pos = body + size + (size & 1u);
  }
  throw Error(ErrorCode::kMalformedHeader,
              have_fmt ? "no data chunk" : "no fmt chunk");
}

std::vector<unsigned char> encode_wav(const AudioBuffer &audio) {
  const auto n = static_cast<std::uint32_t>(audio.size());
  const std::uint32_t data_bytes = 2 * n;
  const auto rate = static_cast<std::uint32_t>(audio.sample_rate());
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, rate);
  put_u32(out, rate * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double x : audio.samples())
    put_u16(out, static_cast<std::uint16_t>(quantize(x)));
  return out;
}

AudioBuffer read_wav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read error on " + path.string());
  return decode_wav(bytes);
}

void write_file_atomic(const std::filesystem::path &path,
                       std::span<const unsigned char> bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot create " + tmp.string());
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorCode::kIoFailure, "write error on " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(ErrorCode::kIoFailure,
                "cannot rename into " + path.string() + ": " + ec.message());
  }
}

void write_wav(const std::filesystem::path &path, const AudioBuffer &audio) {
  write_file_atomic(path, encode_wav(audio));
}

std::vector<UtteranceRecord> parse_manifest_text(const std::string &text) {
  std::vector<UtteranceRecord> records;
  std::unordered_set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim_cr(std::move(line));
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
        fields[2].empty())
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": expected utt_id<TAB>path<TAB>label");
    if (!seen.insert(fields[0]).second)
      throw Error(ErrorCode::kDuplicateUttId,
                  "line " + std::to_string(line_no) + ": duplicate utt_id '" + fields[0] + "'");
    records.push_back({fields[0], fields[1], fields[2]});
  }
  return records;
}

std::vector<UtteranceRecord> parse_manifest(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest_text(buf.str());
}

std::string format_manifest(const std::vector<UtteranceRecord> &records) {
  std::string out;
  for (const auto &r : records) {
    out += r.utt_id;
    out += '\t';
    out += r.path.string();
    out += '\t';
    out += r.label;
    out += '\n';
  }
  return out;
}

void write_manifest(const std::filesystem::path &path,
                    const std::vector<UtteranceRecord> &records) {
  std::string text = format_manifest(records);
  write_file_atomic(path, std::span(reinterpret_cast<const unsigned char *>(text.data()),
                                    text.size()));
}

}  // namespace tsmaug
