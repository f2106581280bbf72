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

#ifndef ASRINC_WAV_H_
#define ASRINC_WAV_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace asrinc {

struct AudioBuffer {
  std::vector<double> samples;  // mono, in [-1, 1]
  int32_t sample_rate_hz = 0;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// RIFF PCM, 16-bit, mono. Samples are scaled by 1/32768.
AudioBuffer read_wav(const std::filesystem::path &path);
AudioBuffer decode_wav(const std::string &bytes);

// Inverse of decode_wav; samples are clipped to the int16 range.
std::string encode_wav(const AudioBuffer &audio);
void write_wav(const std::filesystem::path &path, const AudioBuffer &audio);

}  // namespace asrinc

#endif  // ASRINC_WAV_H_
