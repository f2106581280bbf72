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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.h"
#include "pipeline.h"
#include "stats.h"
#include "synth.h"
#include "test_util.h"

namespace asrinc {
namespace {

namespace fs = std::filesystem;

UtteranceRecord rec(std::string id, std::string spk, std::optional<double> rating,
                    std::optional<std::string> tp = std::nullopt) {
  UtteranceRecord r;
  r.utterance_id = std::move(id);
  r.speaker_id = std::move(spk);
  r.timepoint_id = std::move(tp);
  r.posterior_path = r.utterance_id + ".ctcp";
  r.rating = rating;
  return r;
}

ScoreRecord score(std::string id, double v, MethodKind kind = MethodKind::kNgram,
                  std::string model = {}, int run = 0) {
  ScoreRecord s;
  s.utterance_id = std::move(id);
  s.method = {kind, std::move(model), run};
  s.value = v;
  return s;
}

TEST(Aggregate, MeansPerSpeakerTime) {
  Manifest m;
  m.records = {rec("a1", "A", 4, "t1"), rec("a2", "A", 4, "t1"), rec("a3", "A", 2, "t2"),
               rec("b1", "B", 1)};
  std::vector<std::pair<SpeakerTimeKey, Method>> empty;
  const auto out = aggregate_speaker(
      {score("a1", 0.2), score("a2", 0.4), score("a3", 0.9), score("b1", 0.5),
       score("a1", 100.0, MethodKind::kWadaSnr)},
      m, false, &empty);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(empty.size(), 2u);
  const auto find = [&](const std::string &spk, std::optional<std::string> tp, MethodKind k) {
    for (const auto &s : out) {
      if (s.key.speaker_id == spk && s.key.timepoint_id == tp && s.method.kind == k) return s;
    }
    ADD_FAILURE() << spk;
    return SpeakerScore{};
  };
  EXPECT_DOUBLE_EQ(find("A", "t1", MethodKind::kNgram).mean_value, 0.3);
  EXPECT_EQ(find("A", "t1", MethodKind::kNgram).n_utterances, 2);
  EXPECT_DOUBLE_EQ(find("A", "t2", MethodKind::kNgram).mean_value, 0.9);
  EXPECT_DOUBLE_EQ(find("B", std::nullopt, MethodKind::kNgram).mean_value, 0.5);
  const auto wada = find("A", "t1", MethodKind::kWadaSnr);
  EXPECT_EQ(wada.n_utterances, 1);
  EXPECT_EQ(wada.n_excluded, 1);
}

TEST(Aggregate, NonFiniteScoresAndEmptyGroups) {
  Manifest m;
  m.records = {rec("a1", "A", 4), rec("a2", "A", 4), rec("b1", "B", 1)};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<ScoreRecord> records{score("a1", nan), score("a2", 1.0), score("b1", nan)};
  EXPECT_ASRINC_ERROR(aggregate_speaker(records, m), ErrorCode::kEmptyGroup);
  std::vector<std::pair<SpeakerTimeKey, Method>> empty;
  const auto out = aggregate_speaker(records, m, false, &empty);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_DOUBLE_EQ(out[0].mean_value, 1.0);
  EXPECT_EQ(out[0].n_excluded, 1);
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_EQ(empty[0].first.speaker_id, "B");
}

TEST(Ratings, OnePerSpeakerTime) {
  Manifest m;
  m.records = {rec("a1", "A", 4), rec("a2", "A", std::nullopt), rec("b1", "B", std::nullopt)};
  const auto r = speaker_ratings(m);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.begin()->second, 4.0);
  m.records.push_back(rec("a3", "A", 3));
  EXPECT_ASRINC_ERROR(speaker_ratings(m), ErrorCode::kRatingConflict);
}

TEST(Correlate, MatchesDirectPearsonAndSkipsDegenerate) {
  Manifest m;
  std::vector<ScoreRecord> records;
  const std::vector<double> ratings{1, 2, 3, 4, 5};
  const std::vector<double> values{0.9, 0.7, 0.75, 0.2, 0.1};
  for (size_t i = 0; i < ratings.size(); ++i) {
    const std::string id = "u" + std::to_string(i);
    m.records.push_back(rec(id, "S" + std::to_string(i), ratings[i]));
    records.push_back(score(id, values[i]));
    records.push_back(score(id, 1.0, MethodKind::kReferenceWer));
  }
  const auto runs = correlate(aggregate_speaker(records, m), speaker_ratings(m));
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0].method.kind, MethodKind::kNgram);
  EXPECT_EQ(runs[0].n_points, 5);
  EXPECT_NEAR(runs[0].pearson_r, oracle::pearson_direct(values, ratings), 1e-12);
}

TEST(Dataset, Description) {
  Manifest m;
  m.records = {rec("a1", "A", 4, "t1"), rec("a2", "A", 4, "t1"), rec("a3", "A", 4, "t1"),
               rec("a4", "A", 2, "t2"), rec("b1", "B", 1)};
  const DatasetInfo d = describe_dataset(m, "d", "Dutch");
  EXPECT_EQ(d.n_spk, 2);
  EXPECT_EQ(d.n_spk_time, 3);
  EXPECT_EQ(d.n_sen, 3);
  EXPECT_EQ(d.n_utterances, 5);
}

TEST(Report, RowOrderCiAndSignificance) {
  std::vector<RunResult> runs;
  const std::vector<double> m1{-0.80, -0.82, -0.78}, m2{-0.50, -0.52, -0.49};
  for (int r = 0; r < 3; ++r) {
    runs.push_back({Method{MethodKind::kLlm, "m2", r}, m2[static_cast<size_t>(r)], 10});
    runs.push_back({Method{MethodKind::kLlm, "m1", r}, m1[static_cast<size_t>(r)], 10});
  }
  runs.push_back({Method{MethodKind::kReferenceWer, {}, 0}, -0.9, 10});
  runs.push_back({Method{MethodKind::kNgram, {}, 0}, -0.6, 10});
  runs.push_back({Method{MethodKind::kSpeechRate, {}, 0}, 0.4, 10});
  DatasetInfo info;
  info.name = "d";
  const ReportTable t = build_report(info, runs, true, {"m1", "m2"});
  std::vector<std::string> labels;
  for (const auto &row : t.rows) labels.push_back(row.row_label());
  EXPECT_EQ(labels, (std::vector<std::string>{"speech_rate", "ngram", "llm:m1", "llm:m2", "reference_wer"}));
  const MethodSummary &a = t.rows[2], &b = t.rows[3];
  EXPECT_NEAR(a.mean_r, -0.8, 1e-12);
  const MeanCi ci = mean_ci(m1);
  ASSERT_TRUE(a.ci_halfwidth);
  EXPECT_NEAR(*a.ci_halfwidth, ci.halfwidth, 1e-12);
  EXPECT_FALSE(a.p_value);
  ASSERT_TRUE(b.p_value);
  EXPECT_NEAR(*b.p_value, two_sample_t(m2, m1).p_value, 1e-12);
  EXPECT_TRUE(b.significant);

  const std::string text = render_report_text({t});
  EXPECT_NE(text.find("**-0.9000**"), std::string::npos) << text;
  EXPECT_NE(text.find("__-0.8000"), std::string::npos) << text;
  EXPECT_NE(text.find("+"), std::string::npos);

  const ReportTable back = report_from_json(report_to_json(t));
  EXPECT_EQ(render_report_text({back}), text);
}

class FixturePipeline : public ::testing::Test {
 protected:
  void make(const std::string &name, SynthConfig cfg = {}) {
    dir_ = oracle::temp_dir(name);
    corpus_ = generate_fixture(dir_, cfg);
    manifest_ = load_manifest(dir_ / "manifest.jsonl");
    vocab_ = load_vocabulary(dir_ / "vocab.txt");
    lm_ = load_arpa(dir_ / "lm.arpa");
    mock_ = MockCorrector::load(dir_ / "mock_fix_all.json");
    assets_ = {&*vocab_, &*lm_, mock_.get()};
    config_.methods = {MethodKind::kSpeechRate, MethodKind::kWadaSnr, MethodKind::kNgram,
                       MethodKind::kLlm, MethodKind::kReferenceWer};
    config_.retry.sleep = [](std::chrono::milliseconds) {};
  }

  fs::path dir_;
  SynthCorpus corpus_;
  Manifest manifest_;
  std::optional<Vocabulary> vocab_;
  std::optional<NGramModel> lm_;
  std::unique_ptr<MockCorrector> mock_;
  PipelineAssets assets_;
  PipelineConfig config_;
};

TEST_F(FixturePipeline, ScoresMatchInjectedCorruption) {
  SynthConfig cfg;
  cfg.speakers = 6;
  make("pipe_scores", cfg);
  const PipelineResult res = run_pipeline(manifest_, assets_, config_);
  EXPECT_TRUE(res.errors.empty());
  // Four single-valued methods plus three LLM runs per utterance.
  EXPECT_EQ(res.records.size(), corpus_.utterances.size() * 7);
  for (const ScoreRecord &r : res.records) {
    const auto &u = *std::find_if(corpus_.utterances.begin(), corpus_.utterances.end(),
                                  [&](const SynthUtterance &x) { return x.record.utterance_id == r.utterance_id; });
    const double expected = static_cast<double>(u.corrupted) / static_cast<double>(u.truth.size());
    if (r.method.kind == MethodKind::kNgram || r.method.kind == MethodKind::kLlm ||
        r.method.kind == MethodKind::kReferenceWer) {
      EXPECT_DOUBLE_EQ(r.value, expected) << r.utterance_id << " " << r.method.label();
    }
  }
  for (const RunResult &run : res.runs) {
    if (run.method.kind == MethodKind::kNgram || run.method.kind == MethodKind::kReferenceWer) {
      EXPECT_NEAR(run.pearson_r, -1.0, 1e-9);
    }
  }
}

TEST_F(FixturePipeline, OutputIndependentOfThreadCounts) {
  SynthConfig cfg;
  cfg.speakers = 5;
  make("pipe_jobs", cfg);
  config_.out_dir = dir_ / "run1";
  config_.jobs = 1;
  config_.llm_parallelism = 1;
  write_run_directory(config_.out_dir, manifest_, config_, run_pipeline(manifest_, assets_, config_), true);
  config_.out_dir = dir_ / "run8";
  config_.jobs = 8;
  config_.llm_parallelism = 8;
  write_run_directory(config_.out_dir, manifest_, config_, run_pipeline(manifest_, assets_, config_), true);
  size_t compared = 0;
  for (const auto &e : fs::recursive_directory_iterator(dir_ / "run1")) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), dir_ / "run1");
    ASSERT_TRUE(fs::exists(dir_ / "run8" / rel)) << rel;
    EXPECT_EQ(oracle::read_file(e.path()), oracle::read_file(dir_ / "run8" / rel)) << rel;
    ++compared;
  }
  EXPECT_GT(compared, 10u);
}

TEST_F(FixturePipeline, AuditReplayDetectsTampering) {
  SynthConfig cfg;
  cfg.speakers = 4;
  make("pipe_audit", cfg);
  const fs::path run = dir_ / "run";
  write_run_directory(run, manifest_, config_, run_pipeline(manifest_, assets_, config_), true);
  EXPECT_TRUE(audit_replay(run));
  std::string csv = oracle::read_file(run / "scores.csv");
  const size_t pos = csv.find(",ngram,");
  ASSERT_NE(pos, std::string::npos);
  const size_t value_at = csv.find(',', csv.find(',', pos + 7) + 1) + 1;
  csv.insert(value_at, "9");
  oracle::write_file(run / "scores.csv", csv);
  EXPECT_FALSE(audit_replay(run));
}

TEST_F(FixturePipeline, PerUtteranceFailuresAreQuarantined) {
  SynthConfig cfg;
  cfg.speakers = 4;
  make("pipe_fail", cfg);
  fs::remove(manifest_.resolve(manifest_.records[0].posterior_path));
  config_.methods = {MethodKind::kNgram, MethodKind::kWadaSnr};
  const PipelineResult res = run_pipeline(manifest_, assets_, config_);
  ASSERT_EQ(res.errors.size(), 1u);
  EXPECT_EQ(res.errors[0].utterance_id, manifest_.records[0].utterance_id);
  EXPECT_EQ(res.errors[0].method, "ngram");
  EXPECT_EQ(res.errors[0].code, ErrorCode::kIoError);
  EXPECT_EQ(res.records.size(), manifest_.records.size() * 2 - 1);
  EXPECT_EQ(res.report.info.n_failed, 1);

  for (const auto &r : manifest_.records) fs::remove(manifest_.resolve(r.posterior_path));
  config_.methods = {MethodKind::kNgram};
  EXPECT_ASRINC_ERROR(run_pipeline(manifest_, assets_, config_), ErrorCode::kNoUtterancesSucceeded);
}

TEST_F(FixturePipeline, ValidationErrors) {
  SynthConfig cfg;
  cfg.speakers = 3;
  cfg.write_audio = false;
  make("pipe_validate", cfg);
  PipelineConfig c = config_;
  c.methods = {};
  EXPECT_ASRINC_ERROR(validate_pipeline(manifest_, assets_, c), ErrorCode::kMissingConfiguration);
  c.methods = {MethodKind::kNgram};
  EXPECT_ASRINC_ERROR(validate_pipeline(manifest_, {&*vocab_, nullptr, nullptr}, c),
                      ErrorCode::kMissingConfiguration);
  EXPECT_ASRINC_ERROR(validate_pipeline(manifest_, {nullptr, &*lm_, nullptr}, c),
                      ErrorCode::kMissingConfiguration);
  c.methods = {MethodKind::kLlm};
  EXPECT_ASRINC_ERROR(validate_pipeline(manifest_, {&*vocab_, nullptr, nullptr}, c),
                      ErrorCode::kMissingConfiguration);
  c.llm_runs = 0;
  EXPECT_ASRINC_ERROR(validate_pipeline(manifest_, assets_, c), ErrorCode::kInvalidArgument);
  c = config_;
  c.methods = {MethodKind::kNgram};
  c.decoder.beam_width = 0;
  EXPECT_ASRINC_ERROR(validate_pipeline(manifest_, assets_, c), ErrorCode::kInvalidArgument);

  Manifest unrated = manifest_;
  for (auto &r : unrated.records) r.rating.reset();
  c = config_;
  c.methods = {MethodKind::kNgram};
  c.require_ratings = true;
  EXPECT_ASRINC_ERROR(validate_pipeline(unrated, assets_, c), ErrorCode::kMissingRatings);
  c.require_ratings = false;
  EXPECT_NO_THROW(validate_pipeline(unrated, assets_, c));

  Manifest no_duration = manifest_;
  no_duration.records[0].duration_s.reset();
  no_duration.records[0].audio_path.reset();
  c.methods = {MethodKind::kSpeechRate};
  EXPECT_ASRINC_ERROR(validate_pipeline(no_duration, assets_, c), ErrorCode::kMissingDuration);
}

TEST_F(FixturePipeline, GoldenReport) {
  SynthConfig cfg;
  cfg.speakers = 5;
  cfg.utterances_per_speaker = 2;
  cfg.noise_step = 0.1;
  make("pipe_golden", cfg);
  mock_ = MockCorrector::load(dir_ / "mock_half_fix.json");
  assets_.corrector = mock_.get();
  config_.dataset = "small";
  config_.out_dir = dir_ / "run";
  const PipelineResult res = run_pipeline(manifest_, assets_, config_);
  EXPECT_EQ(res.report.info.n_utterances, 10);
  const std::string golden =
      oracle::read_file(fs::path(ASRINC_SOURCE_DIR) / "tests" / "golden" / "report_small.txt");
  EXPECT_EQ(oracle::read_file(dir_ / "run" / "report.txt"), golden);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 7, [&](size_t i) { hits[i]++; });
  for (const auto &h : hits) EXPECT_EQ(h.load(), 1);
}

}  // namespace
}  // namespace asrinc
