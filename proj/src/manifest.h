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

#ifndef ASRINC_MANIFEST_H_
#define ASRINC_MANIFEST_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace asrinc {

struct UtteranceRecord {
  std::string utterance_id;
  std::string speaker_id;
  std::optional<std::string> timepoint_id;
  std::string posterior_path;
  std::optional<std::string> audio_path;
  std::optional<std::string> ground_truth_text;
  std::optional<double> rating;
  std::optional<double> duration_s;

  friend bool operator==(const UtteranceRecord &, const UtteranceRecord &) = default;
};

// Aggregation key of an utterance; an absent timepoint is its own group.
struct SpeakerTimeKey {
  std::string speaker_id;
  std::optional<std::string> timepoint_id;

  friend auto operator<=>(const SpeakerTimeKey &, const SpeakerTimeKey &) = default;
  friend bool operator==(const SpeakerTimeKey &, const SpeakerTimeKey &) = default;
};

inline SpeakerTimeKey speaker_time(const UtteranceRecord &r) {
  return {r.speaker_id, r.timepoint_id};
}

struct Manifest {
  std::vector<UtteranceRecord> records;
  // Directory that relative paths in the records are resolved against.
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::string &path) const;
  const UtteranceRecord *find(std::string_view utterance_id) const;
};

// JSON Lines; blank lines are skipped. Errors carry the 1-based line number.
Manifest parse_manifest(std::string_view text, std::filesystem::path base_dir = {});
Manifest load_manifest(const std::filesystem::path &path);

std::string serialize_manifest(const std::vector<UtteranceRecord> &records);

// Throws MissingDuration if a record can provide neither audio nor a
// duration, as required by the speech-rate baseline.
void require_durations(const Manifest &manifest);

}  // namespace asrinc

#endif  // ASRINC_MANIFEST_H_
