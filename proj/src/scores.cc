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

#include "scores.h"

#include "error.h"

namespace asrinc {

std::string_view method_kind_name(MethodKind kind) {
  switch (kind) {
    case MethodKind::kNgram: return "ngram";
    case MethodKind::kLlm: return "llm";
    case MethodKind::kReferenceWer: return "reference_wer";
    case MethodKind::kSpeechRate: return "speech_rate";
    case MethodKind::kWadaSnr: return "wada_snr";
  }
  return "unknown";
}

MethodKind parse_method_kind(std::string_view name) {
  for (MethodKind k : {MethodKind::kNgram, MethodKind::kLlm, MethodKind::kReferenceWer,
                       MethodKind::kSpeechRate, MethodKind::kWadaSnr}) {
    if (method_kind_name(k) == name) return k;
  }
  fail(ErrorCode::kUnknownMethod, "unknown method '" + std::string(name) + "'");
}

std::string Method::label() const {
  if (kind != MethodKind::kLlm) return std::string(method_kind_name(kind));
  return "llm:" + model_name + ":" + std::to_string(run_index);
}

ScoreRecord inconsistency_score(const std::string &utterance_id, const Transcript &w_greedy,
                                const Transcript &w_reference, const Method &method,
                                const WerOptions &options) {
  ScoreRecord r;
  r.utterance_id = utterance_id;
  r.method = method;
  r.value = wer(align_words(w_greedy.words, w_reference.words), options);
  r.hyp_source = w_greedy.source;
  r.ref_source = w_reference.source;
  return r;
}

ScoreRecord reference_wer(const std::string &utterance_id, const Transcript &hyp,
                          const std::optional<Transcript> &ground_truth,
                          const WerOptions &options) {
  if (!ground_truth) {
    fail(ErrorCode::kMissingGroundTruth, "utterance '" + utterance_id + "' has no ground truth");
  }
  ScoreRecord r;
  r.utterance_id = utterance_id;
  r.method = {MethodKind::kReferenceWer, {}, 0};
  r.value = wer(align_words(hyp.words, ground_truth->words), options);
  r.hyp_source = hyp.source;
  r.ref_source = TranscriptSource::kGroundTruth;
  return r;
}

}  // namespace asrinc
