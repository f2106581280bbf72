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

#ifndef ASRINC_HARNESS_H_
#define ASRINC_HARNESS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "manifest.h"
#include "scores.h"

namespace asrinc {

struct SpeakerScore {
  SpeakerTimeKey key;
  Method method;
  double mean_value = 0.0;
  int32_t n_utterances = 0;
  int32_t n_excluded = 0;  // utterances of the group without a usable score
};

// Mean score per (speaker, timepoint, method). Utterances of a group that
// lack a finite score for the method are excluded and counted. A
// speaker-time left with no scores for a method throws EmptyGroup when
// strict, and is otherwise dropped and reported through empty_groups.
std::vector<SpeakerScore> aggregate_speaker(
    const std::vector<ScoreRecord> &records, const Manifest &manifest, bool strict = true,
    std::vector<std::pair<SpeakerTimeKey, Method>> *empty_groups = nullptr);

// One rating per speaker-time; throws RatingConflict when utterances of a
// group disagree. Groups without any rating are absent.
std::map<SpeakerTimeKey, double> speaker_ratings(const Manifest &manifest);

struct RunResult {
  Method method;
  double pearson_r = 0.0;
  int32_t n_points = 0;
};

// Pearson r between speaker-level scores and ratings, per method and run.
// Methods whose scores cannot be correlated (fewer than 3 points or zero
// variance) are skipped.
std::vector<RunResult> correlate(const std::vector<SpeakerScore> &scores,
                                 const std::map<SpeakerTimeKey, double> &ratings);

struct DatasetInfo {
  std::string name;
  std::string language;
  int32_t n_spk = 0;
  int32_t n_spk_time = 0;
  int32_t n_sen = 0;  // most utterances in any speaker-time
  int32_t n_utterances = 0;
  int32_t n_failed = 0;  // (utterance, method) pairs that errored
};

DatasetInfo describe_dataset(const Manifest &manifest, std::string name, std::string language);

// A row of the correlation table: one method, or one LLM model with its runs.
struct MethodSummary {
  MethodKind kind = MethodKind::kNgram;
  std::string model_name;
  std::vector<RunResult> runs;
  double mean_r = 0.0;
  std::optional<double> ci_halfwidth;
  std::optional<double> p_value;  // LLM rows after the first, vs the first model
  bool significant = false;

  std::string row_label() const;
};

struct ReportTable {
  DatasetInfo info;
  bool has_ratings = false;
  std::vector<MethodSummary> rows;
};

// Rows ordered as: baselines, n-gram, LLM models (in the given order),
// reference WER.
ReportTable build_report(const DatasetInfo &info, const std::vector<RunResult> &runs,
                         bool has_ratings, const std::vector<std::string> &llm_models,
                         double ci_level = 0.95);

// Table with one column per dataset. Markers: ** best |r| in a column,
// __ best among the reference-free proposed methods, + significant
// difference between LLM models.
std::string render_report_text(const std::vector<ReportTable> &tables);

std::string report_to_json(const ReportTable &table);
ReportTable report_from_json(const std::string &json_text);

struct LlmAccuracyRow {
  std::string model_name;
  int32_t runs = 0;
  int32_t n_utterances = 0;
  double greedy_wer_micro = 0.0;
  double greedy_wer_macro = 0.0;
  double llm_wer_micro = 0.0;  // mean over runs
  double llm_wer_macro = 0.0;
  std::optional<double> r_llm_wer;  // mean over runs of pearson(speaker W_LLM WER, rating)
};

struct LlmAccuracyTable {
  std::string dataset;
  std::vector<LlmAccuracyRow> rows;
};

// Recomputes W_greedy and W_LLM WER against the ground truth from a run
// directory. Throws MissingGroundTruth if no utterance has ground truth.
LlmAccuracyTable llm_accuracy_report(const std::filesystem::path &run_dir);
std::string render_llm_accuracy_text(const std::vector<LlmAccuracyTable> &tables);
std::string render_llm_accuracy_csv(const LlmAccuracyTable &table);

}  // namespace asrinc

#endif  // ASRINC_HARNESS_H_
