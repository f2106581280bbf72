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

#ifndef ASRINC_SCORES_H_
#define ASRINC_SCORES_H_

#include <compare>
#include <optional>
#include <string>

#include "alignment.h"
#include "text.h"

namespace asrinc {

enum class MethodKind { kNgram, kLlm, kReferenceWer, kSpeechRate, kWadaSnr };

std::string_view method_kind_name(MethodKind kind);

// Throws UnknownMethod.
MethodKind parse_method_kind(std::string_view name);

struct Method {
  MethodKind kind = MethodKind::kNgram;
  std::string model_name;  // llm only
  int32_t run_index = 0;   // llm only

  // "ngram", "llm:<model>:<run>", ...
  std::string label() const;

  friend auto operator<=>(const Method &, const Method &) = default;
  friend bool operator==(const Method &, const Method &) = default;
};

struct ScoreRecord {
  std::string utterance_id;
  Method method;
  double value = 0.0;
  std::optional<TranscriptSource> hyp_source;
  std::optional<TranscriptSource> ref_source;
};

// WER of the greedy transcript against a generated reference, with the
// reference length as denominator. Higher means less intelligible.
ScoreRecord inconsistency_score(const std::string &utterance_id, const Transcript &w_greedy,
                                const Transcript &w_reference, const Method &method,
                                const WerOptions &options = {});

// Standard WER against the ground truth. Throws MissingGroundTruth.
ScoreRecord reference_wer(const std::string &utterance_id, const Transcript &hyp,
                          const std::optional<Transcript> &ground_truth,
                          const WerOptions &options = {});

}  // namespace asrinc

#endif  // ASRINC_SCORES_H_
