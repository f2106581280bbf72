// Copyright (c) 2026 The asrinc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "error.h"

namespace asrinc {

namespace {

uint32_t u32(const unsigned char *p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<uint32_t>(p[3]) << 24);
}
uint16_t u16(const unsigned char *p) { return static_cast<uint16_t>(p[0] | (p[1] << 8)); }

void put32(std::string *s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put16(std::string *s, uint16_t v) {
  s->push_back(static_cast<char>(v & 0xff));
  s->push_back(static_cast<char>(v >> 8));
}

}  // namespace

AudioBuffer decode_wav(const std::string &bytes) {
  const auto *p = reinterpret_cast<const unsigned char *>(bytes.data());
  const size_t n = bytes.size();
  if (n < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0) {
    fail(ErrorCode::kNotWav, "not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  uint16_t channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t pos = 12;
  while (pos + 8 <= n) {
    const uint32_t size = u32(p + pos + 4);
    const unsigned char *body = p + pos + 8;
    const size_t available = n - (pos + 8);
    if (std::memcmp(p + pos, "fmt ", 4) == 0) {
      if (size < 16 || available < 16) fail(ErrorCode::kTruncatedFile, "fmt chunk truncated");
      uint16_t format = u16(body);
      channels = u16(body + 2);
      rate = u32(body + 4);
      bits = u16(body + 14);
      // WAVE_FORMAT_EXTENSIBLE carries the real format in the sub-format GUID.
      if (format == 0xFFFE && size >= 40 && available >= 40) format = u16(body + 24);
      if (format != 1) {
        fail(ErrorCode::kUnsupportedEncoding, "only PCM WAV is supported (format tag " +
                                                  std::to_string(format) + ")");
      }
      if (channels != 1) {
        fail(ErrorCode::kNonMonoAudio, "expected mono audio, got " + std::to_string(channels) +
                                           " channels");
      }
      if (bits != 16) {
        fail(ErrorCode::kUnsupportedEncoding,
             "only 16-bit samples are supported, got " + std::to_string(bits));
      }
      if (rate == 0) fail(ErrorCode::kUnsupportedEncoding, "sample rate is zero");
      have_fmt = true;
    } else if (std::memcmp(p + pos, "data", 4) == 0) {
      if (!have_fmt) fail(ErrorCode::kNotWav, "data chunk before fmt chunk");
      if (available < size) fail(ErrorCode::kTruncatedFile, "data chunk truncated");
      if (size % 2 != 0) fail(ErrorCode::kTruncatedFile, "odd byte count in 16-bit data");
      AudioBuffer audio;
      audio.sample_rate_hz = static_cast<int32_t>(rate);
      audio.samples.resize(size / 2);
      for (size_t i = 0; i < audio.samples.size(); ++i) {
        const auto s = static_cast<int16_t>(u16(body + 2 * i));
        audio.samples[i] = s / 32768.0;
      }
      if (audio.samples.empty()) fail(ErrorCode::kTruncatedFile, "WAV has no samples");
      return audio;
    }
    pos += 8 + size + (size & 1);
  }
  fail(have_fmt ? ErrorCode::kTruncatedFile : ErrorCode::kNotWav, "WAV has no data chunk");
}

AudioBuffer read_wav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_wav(ss.str());
}

std::string encode_wav(const AudioBuffer &audio) {
  const auto data_bytes = static_cast<uint32_t>(audio.samples.size() * 2);
  std::string out = "RIFF";
  put32(&out, 36 + data_bytes);
  out += "WAVEfmt ";
  put32(&out, 16);
  put16(&out, 1);
  put16(&out, 1);
  put32(&out, static_cast<uint32_t>(audio.sample_rate_hz));
  put32(&out, static_cast<uint32_t>(audio.sample_rate_hz) * 2);
  put16(&out, 2);
  put16(&out, 16);
  out += "data";
  put32(&out, data_bytes);
  for (double s : audio.samples) {
    const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    put16(&out, static_cast<uint16_t>(static_cast<int16_t>(scaled)));
  }
  return out;
}

void write_wav(const std::filesystem::path &path, const AudioBuffer &audio) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << encode_wav(audio);
}

}  // namespace asrinc
