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

#ifndef ASRINC_ALIGNMENT_H_
#define ASRINC_ALIGNMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "text.h"

namespace asrinc {

enum class EditType { kMatch, kSubstitute, kInsert, kDelete };

std::string_view edit_type_name(EditType type);

// Insert: a hypothesis word with no reference counterpart.
// Delete: a reference word missing from the hypothesis.
struct EditOp {
  EditType type;
  std::optional<int32_t> hyp_index;
  std::optional<int32_t> ref_index;
  std::optional<std::string> hyp_word;
  std::optional<std::string> ref_word;
};

struct EditAlignment {
  std::vector<EditOp> ops;
  int32_t n_match = 0;
  int32_t n_sub = 0;
  int32_t n_ins = 0;
  int32_t n_del = 0;
  int32_t ref_len = 0;
  int32_t hyp_len = 0;

  int32_t cost() const { return n_sub + n_ins + n_del; }
};

// Unit-cost Levenshtein alignment. On backtrace ties the diagonal
// (match/substitute) is preferred, then delete, then insert.
EditAlignment align_words(const std::vector<std::string> &hyp,
                          const std::vector<std::string> &ref);

struct WerOptions {
  // WER reported when the reference is empty but the hypothesis is not.
  double empty_reference_cap = 1.0;
};

double wer(const EditAlignment &alignment, const WerOptions &options = {});

// Pools edits across utterances. micro = total edits / total reference
// words; macro = mean of per-utterance WER.
class WerAccumulator {
 public:
  explicit WerAccumulator(WerOptions options = {}) : options_(options) {}
  void add(const EditAlignment &alignment);
  double micro() const;
  double macro() const;
  int64_t utterances() const { return utterances_; }

 private:
  WerOptions options_;
  int64_t edits_ = 0;
  int64_t ref_words_ = 0;
  int64_t hyp_words_ = 0;
  double wer_sum_ = 0.0;
  int64_t utterances_ = 0;
};

// One non-match edit, positioned so that applying all spans of a report in
// order to the hypothesis yields the reference.
struct DiffSpan {
  EditType type;
  int32_t hyp_pos;  // index in hyp; for kDelete, the hyp index it precedes
  int32_t ref_pos;  // index in ref; for kInsert, the ref index it precedes
  std::string hyp_word;  // empty for kDelete
  std::string ref_word;  // empty for kInsert
};

std::vector<DiffSpan> diff_report(const EditAlignment &alignment);

std::vector<std::string> apply_diff(const std::vector<std::string> &hyp,
                                    const std::vector<DiffSpan> &spans);

// Side-by-side rendering; changed words are wrapped in ** **.
std::string render_diff_text(const EditAlignment &alignment);

// One JSON object per span. reference labels which reference the hypothesis
// was compared against.
std::string render_diff_jsonl(const std::string &utterance_id,
                              const std::vector<DiffSpan> &spans,
                              const std::string &reference = {});

}  // namespace asrinc

#endif  // ASRINC_ALIGNMENT_H_
