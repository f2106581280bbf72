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

#ifndef ASRINC_SYNTH_H_
#define ASRINC_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "manifest.h"

namespace asrinc {

// Platform-independent variates drawn from raw mt19937_64 output.
class SynthRng {
 public:
  explicit SynthRng(uint64_t seed) : engine_(seed) {}

  double uniform();  // (0, 1)
  double normal();
  double gamma(double shape);  // unit scale
  uint64_t below(uint64_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Gamma-shaped speech (shape 0.4, random sign) mixed with white Gaussian
// noise at the requested SNR. Both components are scaled to exact power.
std::vector<double> gamma_speech_mixture(size_t n, double snr_db, SynthRng &rng);
std::vector<double> gaussian_noise(size_t n, SynthRng &rng);

struct SynthConfig {
  int32_t speakers = 12;
  // Noise rate of speaker i is noise_step * i.
  double noise_step = 0.05;
  int32_t utterances_per_speaker = 4;
  int32_t words_per_utterance = 5;
  uint64_t seed = 20240901;
  int32_t sample_rate_hz = 8000;
  bool write_audio = true;
  std::string dataset = "synthetic";
};

struct SynthUtterance {
  UtteranceRecord record;
  std::vector<std::string> truth;
  std::vector<std::string> greedy;        // what argmax decoding yields
  std::vector<std::string> half_fixed;    // reply of the half-fixing mock
  int32_t corrupted = 0;
};

struct SynthSpeaker {
  std::string speaker_id;
  double noise_rate = 0.0;
  double rating = 0.0;
  int32_t corrupted_words = 0;
  int32_t total_words = 0;
};

struct SynthCorpus {
  std::vector<SynthSpeaker> speakers;
  std::vector<SynthUtterance> utterances;
};

// Writes vocab.txt, lm.arpa, manifest.jsonl, posteriors/*.ctcp, audio/*.wav,
// mock_fix_all.json and mock_half_fix.json under dir.
//
// Each speaker gets exactly round(p * words) corrupted words. A corrupted
// word has one frame where a wrong letter (0.6) beats the right one (0.4),
// so greedy decoding keeps the error and an LM-fused beam repairs it.
// Ratings are 5 * (1 - p).
SynthCorpus generate_fixture(const std::filesystem::path &dir, const SynthConfig &config = {});

}  // namespace asrinc

#endif  // ASRINC_SYNTH_H_
