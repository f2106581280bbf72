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

#include "baselines.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "error.h"

namespace asrinc {

extern const char kWadaSnrTableAsset[];

namespace {

// Statistic on peak-normalized magnitudes, floored at eps.
double wada_statistic(const double *x, size_t n) {
  constexpr double kEps = 1e-10;
  double peak = 0.0;
  for (size_t i = 0; i < n; ++i) peak = std::max(peak, std::abs(x[i]));
  if (peak == 0.0) fail(ErrorCode::kSilentAudio, "audio is silent");
  double mean_abs = 0.0, mean_log = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double a = std::max(std::abs(x[i]) / peak, kEps);
    mean_abs += a;
    mean_log += std::log(a);
  }
  mean_abs /= static_cast<double>(n);
  mean_log /= static_cast<double>(n);
  return std::log(std::max(mean_abs, kEps)) - mean_log;
}

}  // namespace

WadaTable WadaTable::parse(std::string_view text) {
  WadaTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("# version", 0) == 0) table.version = trim(line.substr(9));
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    double g = 0.0, db = 0.0;
    std::string extra;
    if (!(row >> g >> db) || (row >> extra)) {
      fail(ErrorCode::kInvalidTable, "WADA table line " + std::to_string(line_no) +
                                         ": expected 'gain snr_db'");
    }
    table.gain.push_back(g);
    table.snr_db.push_back(db);
  }
  if (table.gain.size() < 2) fail(ErrorCode::kInvalidTable, "WADA table needs at least two rows");
  for (size_t i = 1; i < table.snr_db.size(); ++i) {
    if (!(table.snr_db[i] > table.snr_db[i - 1])) {
      fail(ErrorCode::kInvalidTable, "WADA table SNR column must be strictly increasing");
    }
  }
  return table;
}

WadaTable WadaTable::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const WadaTable &WadaTable::standard() {
  static const WadaTable table = parse(kWadaSnrTableAsset);
  return table;
}

double WadaTable::lookup(double g) const {
  // The low end of the standard table is not monotone in gain, so search
  // for the last row below g instead of bisecting.
  std::optional<size_t> idx;
  for (size_t i = 0; i < gain.size(); ++i) {
    if (gain[i] < g) idx = i;
  }
  if (!idx) return snr_db.front();
  if (*idx == gain.size() - 1) return snr_db.back();
  const size_t i = *idx;
  return snr_db[i] + (g - gain[i]) / (gain[i + 1] - gain[i]) * (snr_db[i + 1] - snr_db[i]);
}

ScoreRecord speech_rate(const std::string &utterance_id,
                        const std::optional<Transcript> &ground_truth, double duration_s,
                        const BaselineConfig &config) {
  if (!ground_truth) {
    fail(ErrorCode::kMissingGroundTruth, "speech rate needs a ground-truth transcript");
  }
  if (!(duration_s > 0.0)) {
    fail(ErrorCode::kNonPositiveDuration, "duration must be positive for speech rate");
  }
  const double per_second = static_cast<double>(ground_truth->words.size()) / duration_s;
  ScoreRecord r;
  r.utterance_id = utterance_id;
  r.method = {MethodKind::kSpeechRate, {}, 0};
  r.value = config.speech_rate_unit == SpeechRateUnit::kWordsPerMinute ? per_second * 60.0
                                                                       : per_second;
  return r;
}

double wada_snr_db(const std::vector<double> &samples, const BaselineConfig &config) {
  const WadaTable &table = config.wada_table ? *config.wada_table : WadaTable::standard();
  if (samples.empty()) fail(ErrorCode::kSilentAudio, "audio is empty");
  if (config.wada_window == 0 || config.wada_window >= samples.size()) {
    return table.lookup(wada_statistic(samples.data(), samples.size()));
  }
  const size_t hop = config.wada_hop ? config.wada_hop : config.wada_window;
  double sum = 0.0;
  size_t frames = 0;
  for (size_t start = 0; start + config.wada_window <= samples.size(); start += hop) {
    try {
      sum += table.lookup(wada_statistic(samples.data() + start, config.wada_window));
      ++frames;
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kSilentAudio) throw;
    }
  }
  if (frames == 0) fail(ErrorCode::kSilentAudio, "every analysis frame is silent");
  return sum / static_cast<double>(frames);
}

ScoreRecord wada_snr(const std::string &utterance_id, const AudioBuffer &audio,
                     const BaselineConfig &config) {
  ScoreRecord r;
  r.utterance_id = utterance_id;
  r.method = {MethodKind::kWadaSnr, {}, 0};
  r.value = wada_snr_db(audio.samples, config);
  return r;
}

}  // namespace asrinc
