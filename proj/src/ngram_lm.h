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

#ifndef ASRINC_NGRAM_LM_H_
#define ASRINC_NGRAM_LM_H_

#include <cmath>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace asrinc {

inline constexpr std::string_view kSentenceStart = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";
inline constexpr std::string_view kUnknownWord = "<unk>";

struct NGramEntry {
  double log10_prob = 0.0;
  std::optional<double> log10_backoff;
};

struct NGramOptions {
  // Natural-log probability returned for out-of-vocabulary words when the
  // model has no <unk>.
  double oov_logprob = std::log(1e-10);
};

// Back-off n-gram model read from ARPA text. Immutable after parsing; all
// query results are natural logarithms.
class NGramModel {
 public:
  NGramModel(int order, std::vector<std::vector<std::pair<std::string, NGramEntry>>> tables,
             NGramOptions options = {});

  int order() const { return order_; }
  const NGramOptions &options() const { return options_; }
  bool contains_word(std::string_view word) const;
  bool has_sentence_boundaries() const { return has_bos_ && has_eos_; }
  size_t size(int n) const { return entries_.at(n - 1).size(); }

  // Words are lowercased before lookup. Only the last order()-1 history
  // words are used.
  double word_logprob(std::string_view word, std::span<const std::string> history) const;

  // Same as word_logprob, for callers that already lowercased their input.
  double word_logprob_folded(std::string_view word, std::span<const std::string> history) const;

  // Sum of conditional log-probabilities. When the model defines <s> and
  // </s> and use_boundaries is set, the history starts at <s> and P(</s>|.)
  // is added. Throws EmptySequence.
  double sequence_logprob(std::span<const std::string> words, bool use_boundaries = true) const;

  // Entries of order n in file order.
  const std::vector<std::pair<std::string, NGramEntry>> &entries(int n) const {
    return entries_.at(n - 1);
  }

 private:
  const NGramEntry *find(int n, const std::string &key) const;
  double backoff_logprob(std::string_view word, std::span<const std::string> history) const;

  int order_;
  NGramOptions options_;
  std::vector<std::vector<std::pair<std::string, NGramEntry>>> entries_;
  std::vector<std::unordered_map<std::string, size_t>> index_;
  bool has_bos_ = false;
  bool has_eos_ = false;
  bool has_unk_ = false;
};

NGramModel parse_arpa(std::string_view text, NGramOptions options = {});

// Reads plain or gzip-compressed ARPA (detected by magic bytes).
NGramModel load_arpa(const std::filesystem::path &path, NGramOptions options = {});

std::string serialize_arpa(const NGramModel &model);

}  // namespace asrinc

#endif  // ASRINC_NGRAM_LM_H_
