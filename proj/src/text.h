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

#ifndef ASRINC_TEXT_H_
#define ASRINC_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace asrinc {

// Shared normalization for every transcript source: NFC, lowercase, drop
// Unicode punctuation except apostrophes and hyphens between two
// alphanumerics, collapse whitespace, split. The CTC word delimiter "|" is
// treated as whitespace.
std::vector<std::string> normalize_text(std::string_view text);

// Full Unicode lowercasing of UTF-8 text.
std::string to_lower_utf8(std::string_view text);

std::string join_words(const std::vector<std::string> &words,
                       std::string_view separator = " ");

std::string trim(std::string_view text);

// RFC 4180 quoting, applied only when the field needs it.
std::string csv_field(std::string_view field);

// Splits one CSV record; handles quoted fields without embedded newlines.
std::vector<std::string> split_csv_line(std::string_view line);

enum class TranscriptSource { kGreedy, kNgramReference, kLlmReference, kGroundTruth };

std::string_view source_name(TranscriptSource source);

struct Transcript {
  std::vector<std::string> words;
  std::string raw_text;
  TranscriptSource source = TranscriptSource::kGreedy;

  static Transcript from_text(std::string raw, TranscriptSource source);

  std::string text() const { return join_words(words); }
  bool empty() const { return words.empty(); }
};

}  // namespace asrinc

#endif  // ASRINC_TEXT_H_
