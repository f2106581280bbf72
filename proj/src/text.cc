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

#include "text.h"

#include <algorithm>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "error.h"

namespace asrinc {

namespace {

icu::UnicodeString nfc_lower(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) fail(ErrorCode::kInternal, "ICU NFC normalizer unavailable");
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString out = nfc->normalize(src, status);
  if (U_FAILURE(status)) fail(ErrorCode::kInvalidArgument, "text is not valid UTF-8");
  out.toLower(icu::Locale::getRoot());
  return out;
}

bool is_joiner(UChar32 c) {
  return c == 0x27 || c == 0x2019 || c == 0x2D || c == 0x2010 || c == 0x2011;
}

}  // namespace

std::vector<std::string> normalize_text(std::string_view text) {
  const icu::UnicodeString s = nfc_lower(text);

  std::vector<UChar32> cps;
  cps.reserve(s.length());
  for (int32_t i = 0; i < s.length(); i = s.moveIndex32(i, 1)) cps.push_back(s.char32At(i));

  std::vector<std::string> words;
  icu::UnicodeString current;
  auto flush = [&]() {
    if (current.isEmpty()) return;
    std::string w;
    current.toUTF8String(w);
    words.push_back(std::move(w));
    current.remove();
  };

  for (size_t i = 0; i < cps.size(); ++i) {
    const UChar32 c = cps[i];
    if (u_isUWhiteSpace(c) || c == '|') {
      flush();
      continue;
    }
    if (u_ispunct(c)) {
      const bool inner = is_joiner(c) && i > 0 && i + 1 < cps.size() &&
                         u_isalnum(cps[i - 1]) && u_isalnum(cps[i + 1]);
      if (!inner) continue;
    }
    if (u_iscntrl(c)) continue;
    current.append(c);
  }
  flush();
  return words;
}

std::string to_lower_utf8(std::string_view text) {
  if (std::all_of(text.begin(), text.end(), [](char c) { return (c & 0x80) == 0; })) {
    std::string out(text);
    for (char &c : out) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
  }
  std::string out;
  nfc_lower(text).toUTF8String(out);
  return out;
}

std::string join_words(const std::vector<std::string> &words, std::string_view separator) {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) out += separator;
    out += words[i];
  }
  return out;
}

std::string trim(std::string_view text) {
  const char *ws = " \t\r\n\f\v";
  const size_t b = text.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const size_t e = text.find_last_not_of(ws);
  return std::string(text.substr(b, e - b + 1));
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string_view source_name(TranscriptSource source) {
  switch (source) {
    case TranscriptSource::kGreedy: return "greedy";
    case TranscriptSource::kNgramReference: return "ngram_reference";
    case TranscriptSource::kLlmReference: return "llm_reference";
    case TranscriptSource::kGroundTruth: return "ground_truth";
  }
  return "unknown";
}

Transcript Transcript::from_text(std::string raw, TranscriptSource source) {
  Transcript t;
  t.words = normalize_text(raw);
  t.raw_text = std::move(raw);
  t.source = source;
  return t;
}

}  // namespace asrinc
