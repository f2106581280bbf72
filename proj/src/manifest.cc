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

#include "manifest.h"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "error.h"

namespace asrinc {

namespace {

using nlohmann::json;

std::string field_error(int line, const std::string &what) {
  return "manifest line " + std::to_string(line) + ": " + what;
}

std::string required_string(const json &j, const char *key, int line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    fail(ErrorCode::kMalformedManifest, field_error(line, std::string("missing string field '") + key + "'"));
  }
  std::string v = it->get<std::string>();
  if (v.empty()) fail(ErrorCode::kMalformedManifest, field_error(line, std::string("empty field '") + key + "'"));
  return v;
}

std::optional<std::string> optional_string(const json &j, const char *key, int line) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    fail(ErrorCode::kMalformedManifest, field_error(line, std::string("field '") + key + "' must be a string"));
  }
  return it->get<std::string>();
}

std::optional<double> optional_number(const json &j, const char *key, int line) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) {
    fail(ErrorCode::kMalformedManifest, field_error(line, std::string("field '") + key + "' must be a number"));
  }
  return it->get<double>();
}

}  // namespace

std::filesystem::path Manifest::resolve(const std::string &path) const {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

const UtteranceRecord *Manifest::find(std::string_view utterance_id) const {
  for (const auto &r : records) {
    if (r.utterance_id == utterance_id) return &r;
  }
  return nullptr;
}

Manifest parse_manifest(std::string_view text, std::filesystem::path base_dir) {
  Manifest manifest;
  manifest.base_dir = std::move(base_dir);
  std::unordered_set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error &e) {
      fail(ErrorCode::kMalformedManifest, field_error(line_no, std::string("invalid JSON: ") + e.what()));
    }
    if (!j.is_object()) fail(ErrorCode::kMalformedManifest, field_error(line_no, "record is not an object"));

    UtteranceRecord r;
    r.utterance_id = required_string(j, "utterance_id", line_no);
    r.speaker_id = required_string(j, "speaker_id", line_no);
    r.timepoint_id = optional_string(j, "timepoint_id", line_no);
    r.posterior_path = required_string(j, "posterior_path", line_no);
    r.audio_path = optional_string(j, "audio_path", line_no);
    r.ground_truth_text = optional_string(j, "ground_truth_text", line_no);
    r.rating = optional_number(j, "rating", line_no);
    r.duration_s = optional_number(j, "duration_s", line_no);
    if (r.duration_s && !(*r.duration_s > 0.0)) {
      fail(ErrorCode::kNonPositiveDuration, field_error(line_no, "duration_s must be > 0"));
    }
    if (!seen.insert(r.utterance_id).second) {
      fail(ErrorCode::kDuplicateUtterance,
           field_error(line_no, "duplicate utterance_id '" + r.utterance_id + "'"));
    }
    manifest.records.push_back(std::move(r));
  }
  return manifest;
}

Manifest load_manifest(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open manifest " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.parent_path());
}

std::string serialize_manifest(const std::vector<UtteranceRecord> &records) {
  std::string out;
  for (const auto &r : records) {
    json j = json::object();
    j["utterance_id"] = r.utterance_id;
    j["speaker_id"] = r.speaker_id;
    if (r.timepoint_id) j["timepoint_id"] = *r.timepoint_id;
    j["posterior_path"] = r.posterior_path;
    if (r.audio_path) j["audio_path"] = *r.audio_path;
    if (r.ground_truth_text) j["ground_truth_text"] = *r.ground_truth_text;
    if (r.rating) j["rating"] = *r.rating;
    if (r.duration_s) j["duration_s"] = *r.duration_s;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void require_durations(const Manifest &manifest) {
  for (const auto &r : manifest.records) {
    if (!r.audio_path && !r.duration_s) {
      fail(ErrorCode::kMissingDuration,
           "utterance '" + r.utterance_id + "' has neither audio_path nor duration_s");
    }
  }
}

}  // namespace asrinc
