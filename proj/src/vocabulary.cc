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

#include "vocabulary.h"

#include <fstream>
#include <sstream>

#include "error.h"

namespace asrinc {

Vocabulary::Vocabulary(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) fail(ErrorCode::kEmptyFile, "vocabulary is empty");
  for (size_t i = 0; i < symbols_.size(); ++i) {
    const std::string &s = symbols_[i];
    if (s.empty()) {
      fail(ErrorCode::kInvalidSymbol, "empty symbol at line " + std::to_string(i + 1));
    }
    if (!index_.emplace(s, static_cast<int32_t>(i)).second) {
      fail(ErrorCode::kDuplicateSymbol,
           "duplicate symbol '" + s + "' at line " + std::to_string(i + 1));
    }
  }
  blank_index_ = index_of(kBlankSymbol);
  delimiter_index_ = index_of(kDelimiterSymbol);
  if (blank_index_ < 0) fail(ErrorCode::kMissingBlank, "vocabulary has no <blank> symbol");
  if (delimiter_index_ < 0) {
    fail(ErrorCode::kMissingDelimiter, "vocabulary has no '|' word delimiter");
  }
}

int32_t Vocabulary::index_of(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  return it == index_.end() ? -1 : it->second;
}

Vocabulary parse_vocabulary(std::string_view text) {
  std::vector<std::string> symbols;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    symbols.push_back(line);
  }
  // A trailing newline does not introduce an extra (empty) symbol, but
  // blank lines in the middle are rejected by the constructor.
  while (!symbols.empty() && symbols.back().empty()) symbols.pop_back();
  return Vocabulary(std::move(symbols));
}

Vocabulary load_vocabulary(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open vocabulary " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_vocabulary(ss.str());
}

}  // namespace asrinc
