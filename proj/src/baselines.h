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

#ifndef ASRINC_BASELINES_H_
#define ASRINC_BASELINES_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scores.h"
#include "text.h"
#include "wav.h"

namespace asrinc {

enum class SpeechRateUnit { kWordsPerMinute, kWordsPerSecond };

// Rows sorted by SNR; the gain column is the statistic
// log(E|x|) - E[log|x|] of a Gamma(0.4) speech + Gaussian noise mixture.
struct WadaTable {
  std::vector<double> gain;
  std::vector<double> snr_db;
  std::string version;

  // Throws InvalidTable.
  static WadaTable parse(std::string_view text);
  static WadaTable load(const std::filesystem::path &path);
  // The table compiled into the library.
  static const WadaTable &standard();

  // Largest row whose gain lies below g, interpolated linearly towards the
  // next row; clamps to the first/last SNR.
  double lookup(double g) const;
};

struct BaselineConfig {
  SpeechRateUnit speech_rate_unit = SpeechRateUnit::kWordsPerMinute;
  // 0 means whole-utterance estimation; otherwise frame length and hop in
  // samples, with the estimate averaged (in dB) over non-silent frames.
  size_t wada_window = 0;
  size_t wada_hop = 0;
  const WadaTable *wada_table = nullptr;  // null: standard table
};

// Throws MissingGroundTruth, NonPositiveDuration.
ScoreRecord speech_rate(const std::string &utterance_id,
                        const std::optional<Transcript> &ground_truth, double duration_s,
                        const BaselineConfig &config = {});

// Throws SilentAudio.
double wada_snr_db(const std::vector<double> &samples, const BaselineConfig &config = {});
ScoreRecord wada_snr(const std::string &utterance_id, const AudioBuffer &audio,
                     const BaselineConfig &config = {});

}  // namespace asrinc

#endif  // ASRINC_BASELINES_H_
