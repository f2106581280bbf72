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

#ifndef ASRINC_PIPELINE_H_
#define ASRINC_PIPELINE_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "alignment.h"
#include "baselines.h"
#include "ctc_decoder.h"
#include "harness.h"
#include "manifest.h"
#include "ngram_lm.h"
#include "posteriors.h"
#include "reference_gen.h"
#include "scores.h"
#include "vocabulary.h"

namespace asrinc {

struct PipelineConfig {
  std::string dataset = "dataset";
  Language language = Language::english();
  std::set<MethodKind> methods;

  DecoderConfig decoder;
  PosteriorValidation validation;
  WerOptions wer;
  BaselineConfig baselines;

  std::vector<std::string> llm_models{"mock"};
  int32_t llm_runs = 3;
  double temperature = 0.0;
  int32_t llm_parallelism = 4;
  RetryPolicy retry;

  int32_t jobs = 1;
  double ci_level = 0.95;
  // Eval mode: correlations are required, so the manifest must carry ratings.
  bool require_ratings = false;
  bool emit_report = true;
  // Empty: nothing is written.
  std::filesystem::path out_dir;
};

struct PipelineAssets {
  const Vocabulary *vocab = nullptr;
  const NGramModel *lm = nullptr;  // required for the ngram method
  Corrector *corrector = nullptr;  // required for the llm method
};

struct UtteranceError {
  std::string utterance_id;
  std::string method;
  ErrorCode code = ErrorCode::kInternal;
  std::string message;
};

struct LlmTranscript {
  std::string model_name;
  int32_t run_index = 0;
  Transcript transcript;
  std::string raw_reply;
  Extraction extraction = Extraction::kBracketed;
  int32_t retries = 0;
};

struct UtteranceTranscripts {
  std::string utterance_id;
  std::optional<Transcript> greedy;
  std::optional<Transcript> ngram_reference;
  std::vector<LlmTranscript> llm;
  std::optional<Transcript> ground_truth;
};

struct PipelineResult {
  std::vector<ScoreRecord> records;  // manifest order, then method order
  std::vector<UtteranceError> errors;
  std::vector<UtteranceTranscripts> transcripts;
  std::vector<SpeakerScore> speaker_scores;
  std::vector<std::pair<SpeakerTimeKey, Method>> empty_groups;
  std::vector<RunResult> runs;
  ReportTable report;
};

// Checks that every selected method has its assets. Throws
// MissingConfiguration, MissingRatings.
void validate_pipeline(const Manifest &manifest, const PipelineAssets &assets,
                       const PipelineConfig &config);

// Scores every utterance with the selected methods, aggregates per
// speaker-time and correlates with ratings. Per-utterance failures are
// recorded in errors; throws NoUtterancesSucceeded if nothing was scored.
// Output does not depend on jobs or llm_parallelism.
PipelineResult run_pipeline(const Manifest &manifest, const PipelineAssets &assets,
                            const PipelineConfig &config);

// Writes the run directory: config.json, manifest.jsonl, transcripts.jsonl,
// llm/<model>/run_<k>/<utterance>.txt, scores.csv, errors.csv, diffs.jsonl
// and, when report is set, report.txt, report.csv, correlations.csv,
// summary.json (and llm_accuracy.* when applicable).
void write_run_directory(const std::filesystem::path &dir, const Manifest &manifest,
                         const PipelineConfig &config, const PipelineResult &result,
                         bool report);

std::string scores_csv(const Manifest &manifest, const std::vector<ScoreRecord> &records);
// One row per utterance and one column per method label.
std::string scores_wide_csv(const Manifest &manifest, const std::vector<ScoreRecord> &records);
std::string report_csv(const std::string &dataset, const std::vector<SpeakerScore> &scores,
                       const std::map<SpeakerTimeKey, double> &ratings);
std::vector<ScoreRecord> parse_scores_csv(const std::string &csv);

// Recomputes report.csv from scores.csv and manifest.jsonl of a run
// directory; true when byte-identical.
bool audit_replay(const std::filesystem::path &run_dir);

// Calls fn(i) for every i in [0, n) on up to jobs threads.
void parallel_for(size_t n, int32_t jobs, const std::function<void(size_t)> &fn);

}  // namespace asrinc

#endif  // ASRINC_PIPELINE_H_
