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

#ifndef ASRINC_VOCABULARY_H_
#define ASRINC_VOCABULARY_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace asrinc {

inline constexpr std::string_view kBlankSymbol = "<blank>";
inline constexpr std::string_view kDelimiterSymbol = "|";

// Ordered CTC output units. Index of a symbol is its position in the list.
class Vocabulary {
 public:
  // Throws Error{DuplicateSymbol, InvalidSymbol, MissingBlank,
  // MissingDelimiter, EmptyFile}.
  explicit Vocabulary(std::vector<std::string> symbols);

  int32_t size() const { return static_cast<int32_t>(symbols_.size()); }
  int32_t blank_index() const { return blank_index_; }
  int32_t delimiter_index() const { return delimiter_index_; }
  const std::string &symbol(int32_t index) const { return symbols_.at(index); }
  const std::vector<std::string> &symbols() const { return symbols_; }

  // -1 when absent.
  int32_t index_of(std::string_view symbol) const;

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int32_t> index_;
  int32_t blank_index_ = -1;
  int32_t delimiter_index_ = -1;
};

Vocabulary load_vocabulary(const std::filesystem::path &path);
Vocabulary parse_vocabulary(std::string_view text);

}  // namespace asrinc

#endif  // ASRINC_VOCABULARY_H_
