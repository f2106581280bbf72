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

#include "pipeline.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "error.h"
#include "wav.h"

namespace asrinc {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << content;
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path.string());
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string safe_name(const std::string &s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '-' || c == '_';
    out += ok ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

std::string method_column(const Method &m) {
  if (m.kind == MethodKind::kLlm) return "llm:" + m.model_name;
  return std::string(method_kind_name(m.kind));
}

bool needs_decoder(const std::set<MethodKind> &methods) {
  return methods.count(MethodKind::kNgram) || methods.count(MethodKind::kLlm) ||
         methods.count(MethodKind::kReferenceWer);
}

struct UtteranceWork {
  UtteranceTranscripts transcripts;
  std::vector<ScoreRecord> records;
  std::vector<UtteranceError> errors;
};

UtteranceError to_error(const std::string &utt, const std::string &method, const std::exception &e) {
  if (const auto *err = dynamic_cast<const Error *>(&e)) {
    return {utt, method, err->code(), err->what()};
  }
  return {utt, method, ErrorCode::kInternal, e.what()};
}

template <typename Fn>
void attempt(UtteranceWork *work, const std::string &method, Fn &&fn) {
  try {
    fn();
  } catch (const std::exception &e) {
    work->errors.push_back(to_error(work->transcripts.utterance_id, method, e));
  }
}

UtteranceWork score_utterance(const Manifest &manifest, const UtteranceRecord &rec,
                              const PipelineAssets &assets, const PipelineConfig &config) {
  UtteranceWork work;
  work.transcripts.utterance_id = rec.utterance_id;
  const auto &methods = config.methods;
  if (rec.ground_truth_text) {
    work.transcripts.ground_truth =
        Transcript::from_text(*rec.ground_truth_text, TranscriptSource::kGroundTruth);
  }

  if (methods.count(MethodKind::kSpeechRate) || methods.count(MethodKind::kWadaSnr)) {
    std::optional<AudioBuffer> audio;
    std::optional<std::string> audio_error;
    std::optional<ErrorCode> audio_code;
    if (rec.audio_path) {
      try {
        audio = read_wav(manifest.resolve(*rec.audio_path));
      } catch (const Error &e) {
        audio_error = e.what();
        audio_code = e.code();
      }
    }
    if (methods.count(MethodKind::kSpeechRate)) {
      attempt(&work, "speech_rate", [&] {
        double duration = 0.0;
        if (rec.duration_s) {
          duration = *rec.duration_s;
        } else if (audio) {
          duration = audio->duration_s();
        } else if (audio_code) {
          fail(*audio_code, *audio_error);
        } else {
          fail(ErrorCode::kMissingDuration, "no duration_s and no audio");
        }
        work.records.push_back(
            speech_rate(rec.utterance_id, work.transcripts.ground_truth, duration, config.baselines));
      });
    }
    if (methods.count(MethodKind::kWadaSnr)) {
      attempt(&work, "wada_snr", [&] {
        if (audio_code) fail(*audio_code, *audio_error);
        if (!audio) fail(ErrorCode::kInvalidArgument, "utterance has no audio_path");
        work.records.push_back(wada_snr(rec.utterance_id, *audio, config.baselines));
      });
    }
  }

  if (!needs_decoder(methods)) return work;

  std::optional<PosteriorMatrix> post;
  try {
    post.emplace(load_posteriors(manifest.resolve(rec.posterior_path), *assets.vocab,
                                 config.validation));
    post->set_utterance_id(rec.utterance_id);
    work.transcripts.greedy = collapse(greedy_decode(*post), *assets.vocab);
  } catch (const std::exception &e) {
    for (MethodKind k : {MethodKind::kNgram, MethodKind::kLlm, MethodKind::kReferenceWer}) {
      if (methods.count(k)) {
        work.errors.push_back(to_error(rec.utterance_id, std::string(method_kind_name(k)), e));
      }
    }
    return work;
  }

  if (methods.count(MethodKind::kNgram)) {
    attempt(&work, "ngram", [&] {
      work.transcripts.ngram_reference =
          beam_search_decode(*post, *assets.vocab, assets.lm, config.decoder);
      work.records.push_back(inconsistency_score(rec.utterance_id, *work.transcripts.greedy,
                                                 *work.transcripts.ngram_reference,
                                                 {MethodKind::kNgram, {}, 0}, config.wer));
    });
  }
  if (methods.count(MethodKind::kReferenceWer)) {
    attempt(&work, "reference_wer", [&] {
      work.records.push_back(reference_wer(rec.utterance_id, *work.transcripts.greedy,
                                           work.transcripts.ground_truth, config.wer));
    });
  }
  return work;
}

int method_rank(const Method &m) {
  switch (m.kind) {
    case MethodKind::kSpeechRate: return 0;
    case MethodKind::kWadaSnr: return 1;
    case MethodKind::kNgram: return 2;
    case MethodKind::kLlm: return 3;
    case MethodKind::kReferenceWer: return 4;
  }
  return 5;
}

}  // namespace

void parallel_for(size_t n, int32_t jobs, const std::function<void(size_t)> &fn) {
  const size_t workers = std::min<size_t>(n, static_cast<size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex mu;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto &t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void validate_pipeline(const Manifest &manifest, const PipelineAssets &assets,
                       const PipelineConfig &config) {
  if (config.methods.empty()) fail(ErrorCode::kMissingConfiguration, "no scoring method selected");
  if (manifest.records.empty()) fail(ErrorCode::kMissingConfiguration, "manifest has no utterances");
  if (needs_decoder(config.methods) && !assets.vocab) {
    fail(ErrorCode::kMissingConfiguration, "decoding methods need a vocabulary");
  }
  if (config.methods.count(MethodKind::kNgram) && !assets.lm) {
    fail(ErrorCode::kMissingConfiguration, "the ngram method needs a language model");
  }
  if (config.methods.count(MethodKind::kLlm)) {
    if (!assets.corrector) fail(ErrorCode::kMissingConfiguration, "the llm method needs a client");
    if (config.llm_models.empty()) fail(ErrorCode::kMissingConfiguration, "no LLM model named");
    if (config.llm_runs < 1) fail(ErrorCode::kInvalidArgument, "llm runs must be >= 1");
    if (config.temperature < 0.0) fail(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  }
  if (config.decoder.beam_width < 1) fail(ErrorCode::kInvalidArgument, "beam width must be >= 1");
  if (config.jobs < 1 || config.llm_parallelism < 1) {
    fail(ErrorCode::kInvalidArgument, "jobs and parallelism must be >= 1");
  }
  if (config.methods.count(MethodKind::kSpeechRate)) require_durations(manifest);
  speaker_ratings(manifest);
  if (config.require_ratings) {
    bool any = false;
    for (const auto &r : manifest.records) any |= r.rating.has_value();
    if (!any) fail(ErrorCode::kMissingRatings, "manifest has no ratings; correlations need them");
  }
}

PipelineResult run_pipeline(const Manifest &manifest, const PipelineAssets &assets,
                            const PipelineConfig &config) {
  validate_pipeline(manifest, assets, config);
  const size_t n = manifest.records.size();

  std::vector<UtteranceWork> work(n);
  parallel_for(n, config.jobs, [&](size_t i) {
    work[i] = score_utterance(manifest, manifest.records[i], assets, config);
  });

  if (config.methods.count(MethodKind::kLlm)) {
    struct Task {
      size_t utt;
      size_t model;
      int32_t run;
    };
    std::vector<Task> tasks;
    for (size_t i = 0; i < n; ++i) {
      if (!work[i].transcripts.greedy) continue;
      for (size_t m = 0; m < config.llm_models.size(); ++m) {
        for (int32_t r = 0; r < config.llm_runs; ++r) tasks.push_back({i, m, r});
      }
    }
    std::vector<std::optional<CorrectionResult>> results(tasks.size());
    std::vector<std::optional<UtteranceError>> failures(tasks.size());
    parallel_for(tasks.size(), config.llm_parallelism, [&](size_t k) {
      const Task &t = tasks[k];
      const std::string &model = config.llm_models[t.model];
      try {
        results[k] = correct_once(*assets.corrector, *work[t.utt].transcripts.greedy,
                                  config.language, t.run, config.temperature, model, config.retry);
      } catch (const std::exception &e) {
        failures[k] = to_error(manifest.records[t.utt].utterance_id,
                               Method{MethodKind::kLlm, model, t.run}.label(), e);
      }
    });
    for (size_t k = 0; k < tasks.size(); ++k) {
      UtteranceWork &w = work[tasks[k].utt];
      if (failures[k]) {
        w.errors.push_back(*failures[k]);
        continue;
      }
      const std::string &model = config.llm_models[tasks[k].model];
      const CorrectionResult &res = *results[k];
      w.transcripts.llm.push_back(
          {model, res.run_index, res.corrected, res.raw_reply, res.extraction, res.retries});
      w.records.push_back(inconsistency_score(w.transcripts.utterance_id, *w.transcripts.greedy,
                                              res.corrected,
                                              {MethodKind::kLlm, model, res.run_index}, config.wer));
    }
  }

  PipelineResult result;
  bool any_scored = false;
  for (auto &w : work) {
    std::stable_sort(w.records.begin(), w.records.end(), [](const ScoreRecord &a, const ScoreRecord &b) {
      return method_rank(a.method) < method_rank(b.method);
    });
    any_scored |= !w.records.empty();
    for (auto &r : w.records) result.records.push_back(std::move(r));
    for (auto &e : w.errors) result.errors.push_back(std::move(e));
    result.transcripts.push_back(std::move(w.transcripts));
  }
  if (!any_scored) {
    std::string first = result.errors.empty() ? std::string() : ": " + result.errors.front().message;
    fail(ErrorCode::kNoUtterancesSucceeded, "no utterance could be scored" + first);
  }

  result.speaker_scores = aggregate_speaker(result.records, manifest, false, &result.empty_groups);
  const auto ratings = speaker_ratings(manifest);
  if (!ratings.empty()) result.runs = correlate(result.speaker_scores, ratings);

  DatasetInfo info = describe_dataset(manifest, config.dataset, config.language.display_name());
  info.n_failed = static_cast<int32_t>(result.errors.size());
  std::vector<std::string> models;
  if (config.methods.count(MethodKind::kLlm)) models = config.llm_models;
  result.report = build_report(info, result.runs, !ratings.empty(), models, config.ci_level);

  if (!config.out_dir.empty()) {
    write_run_directory(config.out_dir, manifest, config, result, config.emit_report);
  }
  return result;
}

std::string scores_csv(const Manifest &manifest, const std::vector<ScoreRecord> &records) {
  std::string out = "utterance_id,speaker_id,timepoint_id,method,model,run_index,value,hyp_source,ref_source\n";
  for (const auto &r : records) {
    const UtteranceRecord *u = manifest.find(r.utterance_id);
    out += csv_field(r.utterance_id) + ',' + csv_field(u ? u->speaker_id : "") + ',' +
           csv_field(u ? u->timepoint_id.value_or("") : "") + ',' +
           std::string(method_kind_name(r.method.kind)) + ',' + csv_field(r.method.model_name) +
           ',' + std::to_string(r.method.run_index) + ',' + num(r.value) + ',' +
           (r.hyp_source ? std::string(source_name(*r.hyp_source)) : "") + ',' +
           (r.ref_source ? std::string(source_name(*r.ref_source)) : "") + '\n';
  }
  return out;
}

std::string scores_wide_csv(const Manifest &manifest, const std::vector<ScoreRecord> &records) {
  std::vector<Method> columns;
  std::map<std::pair<std::string, Method>, double> cells;
  for (const auto &r : records) {
    if (std::find(columns.begin(), columns.end(), r.method) == columns.end()) {
      columns.push_back(r.method);
    }
    cells[{r.utterance_id, r.method}] = r.value;
  }
  std::stable_sort(columns.begin(), columns.end(), [](const Method &a, const Method &b) {
    if (method_rank(a) != method_rank(b)) return method_rank(a) < method_rank(b);
    return a < b;
  });
  std::string out = "utterance_id,speaker_id,timepoint_id";
  for (const auto &m : columns) out += ',' + csv_field(m.label());
  out += '\n';
  for (const auto &u : manifest.records) {
    out += csv_field(u.utterance_id) + ',' + csv_field(u.speaker_id) + ',' +
           csv_field(u.timepoint_id.value_or(""));
    for (const auto &m : columns) {
      auto it = cells.find({u.utterance_id, m});
      out += ',';
      if (it != cells.end()) out += num(it->second);
    }
    out += '\n';
  }
  return out;
}

std::vector<ScoreRecord> parse_scores_csv(const std::string &csv) {
  std::vector<ScoreRecord> out;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  int line_no = 0;
  auto parse_source = [](const std::string &s) -> std::optional<TranscriptSource> {
    for (auto src : {TranscriptSource::kGreedy, TranscriptSource::kNgramReference,
                     TranscriptSource::kLlmReference, TranscriptSource::kGroundTruth}) {
      if (source_name(src) == s) return src;
    }
    return std::nullopt;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (header) {
      header = false;
      continue;
    }
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 9) {
      fail(ErrorCode::kInvalidArgument, "scores.csv line " + std::to_string(line_no) + ": expected 9 fields");
    }
    ScoreRecord r;
    r.utterance_id = f[0];
    r.method = {parse_method_kind(f[3]), f[4], static_cast<int32_t>(std::stol(f[5]))};
    r.value = std::strtod(f[6].c_str(), nullptr);
    r.hyp_source = parse_source(f[7]);
    r.ref_source = parse_source(f[8]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string report_csv(const std::string &dataset, const std::vector<SpeakerScore> &scores,
                       const std::map<SpeakerTimeKey, double> &ratings) {
  std::string out = "dataset,method,run_index,speaker_id,timepoint_id,n_utterances,score,rating\n";
  for (const auto &s : scores) {
    auto it = ratings.find(s.key);
    out += csv_field(dataset) + ',' + csv_field(method_column(s.method)) + ',' +
           std::to_string(s.method.run_index) + ',' + csv_field(s.key.speaker_id) + ',' +
           csv_field(s.key.timepoint_id.value_or("")) + ',' + std::to_string(s.n_utterances) +
           ',' + num(s.mean_value) + ',' + (it == ratings.end() ? "" : num(it->second)) + '\n';
  }
  return out;
}

void write_run_directory(const std::filesystem::path &dir, const Manifest &manifest,
                         const PipelineConfig &config, const PipelineResult &result,
                         bool report) {
  std::filesystem::create_directories(dir);

  ordered_json cfg;
  cfg["dataset"] = config.dataset;
  cfg["language"] = config.language.display_name();
  cfg["methods"] = ordered_json::array();
  for (MethodKind k : config.methods) cfg["methods"].push_back(method_kind_name(k));
  cfg["alpha"] = config.decoder.alpha;
  cfg["beta"] = config.decoder.beta;
  cfg["beam_width"] = config.decoder.beam_width;
  cfg["prune_logp_floor"] = config.decoder.prune_logp_floor;
  cfg["llm_models"] = config.llm_models;
  cfg["llm_runs"] = config.llm_runs;
  cfg["temperature"] = config.temperature;
  cfg["empty_reference_cap"] = config.wer.empty_reference_cap;
  cfg["speech_rate_unit"] = config.baselines.speech_rate_unit == SpeechRateUnit::kWordsPerMinute
                                ? "words_per_minute"
                                : "words_per_second";
  cfg["wer_averaging"] = "micro";
  cfg["ci_level"] = config.ci_level;
  write_file(dir / "config.json", cfg.dump(2) + "\n");
  write_file(dir / "manifest.jsonl", serialize_manifest(manifest.records));

  std::string transcripts, diffs;
  for (const auto &t : result.transcripts) {
    ordered_json j;
    j["utterance_id"] = t.utterance_id;
    j["greedy"] = t.greedy ? ordered_json(t.greedy->raw_text) : ordered_json();
    j["ngram_reference"] = t.ngram_reference ? ordered_json(t.ngram_reference->raw_text) : ordered_json();
    j["llm"] = ordered_json::array();
    for (const auto &l : t.llm) {
      j["llm"].push_back({{"model", l.model_name},
                          {"run_index", l.run_index},
                          {"text", l.transcript.raw_text},
                          {"extraction", extraction_name(l.extraction)},
                          {"retries", l.retries}});
      const auto run_dir = dir / "llm" / safe_name(l.model_name) / ("run_" + std::to_string(l.run_index));
      std::filesystem::create_directories(run_dir);
      write_file(run_dir / (safe_name(t.utterance_id) + ".txt"), l.raw_reply);
    }
    j["ground_truth"] = t.ground_truth ? ordered_json(t.ground_truth->raw_text) : ordered_json();
    transcripts += j.dump() + "\n";

    if (t.greedy && t.ngram_reference) {
      diffs += render_diff_jsonl(t.utterance_id,
                                 diff_report(align_words(t.greedy->words, t.ngram_reference->words)),
                                 "ngram");
    }
    for (const auto &l : t.llm) {
      diffs += render_diff_jsonl(t.utterance_id,
                                 diff_report(align_words(t.greedy->words, l.transcript.words)),
                                 Method{MethodKind::kLlm, l.model_name, l.run_index}.label());
    }
  }
  write_file(dir / "transcripts.jsonl", transcripts);
  write_file(dir / "diffs.jsonl", diffs);
  write_file(dir / "scores.csv", scores_csv(manifest, result.records));

  std::string errors = "utterance_id,method,code,message\n";
  for (const auto &e : result.errors) {
    errors += csv_field(e.utterance_id) + ',' + csv_field(e.method) + ',' +
              std::string(error_code_name(e.code)) + ',' + csv_field(e.message) + '\n';
  }
  write_file(dir / "errors.csv", errors);

  if (!report) return;
  const auto ratings = speaker_ratings(manifest);
  write_file(dir / "report.csv", report_csv(config.dataset, result.speaker_scores, ratings));
  std::string corr = "dataset,method,run_index,pearson_r,n_points\n";
  for (const auto &r : result.runs) {
    corr += csv_field(config.dataset) + ',' + csv_field(method_column(r.method)) + ',' +
            std::to_string(r.method.run_index) + ',' + num(r.pearson_r) + ',' +
            std::to_string(r.n_points) + '\n';
  }
  write_file(dir / "correlations.csv", corr);
  write_file(dir / "summary.json", report_to_json(result.report));

  std::string text = render_report_text({result.report});
  bool has_truth = false;
  for (const auto &t : result.transcripts) has_truth |= t.ground_truth && t.greedy;
  if (has_truth) {
    const LlmAccuracyTable acc = llm_accuracy_report(dir);
    text += "\n" + render_llm_accuracy_text({acc});
    write_file(dir / "llm_accuracy.csv", render_llm_accuracy_csv(acc));
  }
  write_file(dir / "report.txt", text);
}

bool audit_replay(const std::filesystem::path &run_dir) {
  const Manifest manifest = parse_manifest(read_file(run_dir / "manifest.jsonl"));
  const auto cfg = nlohmann::json::parse(read_file(run_dir / "config.json"));
  const auto records = parse_scores_csv(read_file(run_dir / "scores.csv"));
  const auto scores = aggregate_speaker(records, manifest, false);
  const std::string replayed =
      report_csv(cfg.at("dataset").get<std::string>(), scores, speaker_ratings(manifest));
  return replayed == read_file(run_dir / "report.csv");
}

}  // namespace asrinc
