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

#ifndef ASRINC_CTC_DECODER_H_
#define ASRINC_CTC_DECODER_H_

#include <cstdint>
#include <limits>
#include <vector>

#include "ngram_lm.h"
#include "posteriors.h"
#include "text.h"
#include "vocabulary.h"

namespace asrinc {

// One label per frame, before collapsing.
struct RawPath {
  std::vector<int32_t> labels;
};

struct DecoderConfig {
  double alpha = 0.5;       // language model weight
  double beta = 0.5;        // bonus per completed word
  int32_t beam_width = 100;
  // Hypotheses (and per-frame units) whose log mass falls more than this far
  // below the frame's best are dropped. Use -infinity to disable pruning.
  double prune_logp_floor = -20.0;
};

// Per-frame argmax; ties go to the lowest index.
RawPath greedy_decode(const PosteriorMatrix &posteriors);

// Merge runs of identical labels, then drop blanks.
std::vector<int32_t> collapse_labels(const std::vector<int32_t> &labels, int32_t blank);

// Collapse and split into words at the delimiter.
Transcript collapse(const RawPath &raw, const Vocabulary &vocab,
                    TranscriptSource source = TranscriptSource::kGreedy);

// Words of an already-collapsed label sequence.
std::vector<std::string> labels_to_words(const std::vector<int32_t> &collapsed,
                                         const Vocabulary &vocab);

// acoustic + alpha * lm + beta * word_count.
double fused_score(double acoustic_logp, double lm_logp, int64_t word_count,
                   const DecoderConfig &config);

struct BeamHypothesis {
  std::vector<int32_t> prefix;  // collapsed labels, blank-free
  double logp_blank = -std::numeric_limits<double>::infinity();
  double logp_nonblank = -std::numeric_limits<double>::infinity();
  double lm_logp = 0.0;  // natural-log LM mass of the scored words
  int64_t word_count = 0;
  double fused_score = -std::numeric_limits<double>::infinity();

  double acoustic_logp() const;
};

// CTC prefix beam search with word-level shallow fusion. Returns surviving
// hypotheses after end-of-utterance scoring, best first (ties broken by the
// lexicographically smallest prefix). lm may be null, in which case only the
// acoustic mass and the word bonus count. Throws EmptyBeam.
std::vector<BeamHypothesis> beam_search(const PosteriorMatrix &posteriors,
                                        const Vocabulary &vocab, const NGramModel *lm,
                                        const DecoderConfig &config);

Transcript beam_search_decode(const PosteriorMatrix &posteriors, const Vocabulary &vocab,
                              const NGramModel *lm, const DecoderConfig &config);

}  // namespace asrinc

#endif  // ASRINC_CTC_DECODER_H_
