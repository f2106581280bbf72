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

#include "harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "alignment.h"
#include "error.h"
#include "stats.h"
#include "text.h"

namespace asrinc {

namespace {

std::string fmt(const char *format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<SpeakerScore> aggregate_speaker(
    const std::vector<ScoreRecord> &records, const Manifest &manifest, bool strict,
    std::vector<std::pair<SpeakerTimeKey, Method>> *empty_groups) {
  std::map<std::string, SpeakerTimeKey> key_of;
  std::map<SpeakerTimeKey, int32_t> group_size;
  for (const auto &r : manifest.records) {
    key_of.emplace(r.utterance_id, speaker_time(r));
    ++group_size[speaker_time(r)];
  }

  std::set<Method> methods;
  // Sum in manifest order so the mean is independent of record order.
  std::map<std::string, size_t> position;
  for (size_t i = 0; i < manifest.records.size(); ++i) position[manifest.records[i].utterance_id] = i;
  std::map<std::pair<SpeakerTimeKey, Method>, std::vector<std::pair<size_t, double>>> groups;
  for (const auto &rec : records) {
    auto it = key_of.find(rec.utterance_id);
    if (it == key_of.end()) {
      fail(ErrorCode::kInvalidArgument,
           "score for unknown utterance '" + rec.utterance_id + "'");
    }
    methods.insert(rec.method);
    if (!std::isfinite(rec.value)) continue;
    groups[{it->second, rec.method}].emplace_back(position[rec.utterance_id], rec.value);
  }

  std::vector<SpeakerScore> out;
  for (const Method &m : methods) {
    for (const auto &[key, size] : group_size) {
      auto it = groups.find({key, m});
      if (it == groups.end()) {
        if (strict) {
          fail(ErrorCode::kEmptyGroup, "speaker '" + key.speaker_id + "' timepoint '" +
                                           key.timepoint_id.value_or("") + "' has no " +
                                           m.label() + " scores");
        }
        if (empty_groups) empty_groups->emplace_back(key, m);
        continue;
      }
      auto values = it->second;
      std::sort(values.begin(), values.end());
      double sum = 0.0;
      for (const auto &[pos, v] : values) sum += v;
      SpeakerScore s;
      s.key = key;
      s.method = m;
      s.n_utterances = static_cast<int32_t>(values.size());
      s.n_excluded = size - s.n_utterances;
      s.mean_value = sum / static_cast<double>(values.size());
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::map<SpeakerTimeKey, double> speaker_ratings(const Manifest &manifest) {
  std::map<SpeakerTimeKey, double> out;
  for (const auto &r : manifest.records) {
    if (!r.rating) continue;
    auto [it, inserted] = out.emplace(speaker_time(r), *r.rating);
    if (!inserted && it->second != *r.rating) {
      fail(ErrorCode::kRatingConflict, "speaker '" + r.speaker_id +
                                           "' has conflicting ratings within one timepoint");
    }
  }
  return out;
}

std::vector<RunResult> correlate(const std::vector<SpeakerScore> &scores,
                                 const std::map<SpeakerTimeKey, double> &ratings) {
  std::map<Method, std::pair<std::vector<double>, std::vector<double>>> series;
  for (const auto &s : scores) {
    auto it = ratings.find(s.key);
    if (it == ratings.end()) continue;
    auto &[x, y] = series[s.method];
    x.push_back(s.mean_value);
    y.push_back(it->second);
  }
  std::vector<RunResult> out;
  for (const auto &[method, xy] : series) {
    try {
      out.push_back({method, pearson(xy.first, xy.second), static_cast<int32_t>(xy.first.size())});
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kTooFewValues && e.code() != ErrorCode::kDegenerateVariance) throw;
    }
  }
  return out;
}

DatasetInfo describe_dataset(const Manifest &manifest, std::string name, std::string language) {
  DatasetInfo info;
  info.name = std::move(name);
  info.language = std::move(language);
  std::set<std::string> speakers;
  std::map<SpeakerTimeKey, int32_t> groups;
  for (const auto &r : manifest.records) {
    speakers.insert(r.speaker_id);
    ++groups[speaker_time(r)];
  }
  info.n_spk = static_cast<int32_t>(speakers.size());
  info.n_spk_time = static_cast<int32_t>(groups.size());
  for (const auto &[k, n] : groups) info.n_sen = std::max(info.n_sen, n);
  info.n_utterances = static_cast<int32_t>(manifest.records.size());
  return info;
}

std::string MethodSummary::row_label() const {
  if (kind == MethodKind::kLlm) return "llm:" + model_name;
  return std::string(method_kind_name(kind));
}

ReportTable build_report(const DatasetInfo &info, const std::vector<RunResult> &runs,
                         bool has_ratings, const std::vector<std::string> &llm_models,
                         double ci_level) {
  ReportTable table;
  table.info = info;
  table.has_ratings = has_ratings;

  auto single = [&](MethodKind kind) {
    for (const auto &r : runs) {
      if (r.method.kind == kind) {
        MethodSummary s;
        s.kind = kind;
        s.runs = {r};
        s.mean_r = r.pearson_r;
        table.rows.push_back(std::move(s));
        return;
      }
    }
  };
  single(MethodKind::kSpeechRate);
  single(MethodKind::kWadaSnr);
  single(MethodKind::kNgram);

  std::vector<double> first_model_rs;
  for (size_t m = 0; m < llm_models.size(); ++m) {
    MethodSummary s;
    s.kind = MethodKind::kLlm;
    s.model_name = llm_models[m];
    for (const auto &r : runs) {
      if (r.method.kind == MethodKind::kLlm && r.method.model_name == llm_models[m]) {
        s.runs.push_back(r);
      }
    }
    if (s.runs.empty()) continue;
    std::vector<double> rs;
    for (const auto &r : s.runs) rs.push_back(r.pearson_r);
    if (rs.size() >= 2) {
      const MeanCi ci = mean_ci(rs, ci_level);
      s.mean_r = ci.mean;
      s.ci_halfwidth = ci.halfwidth;
    } else {
      s.mean_r = rs.front();
    }
    if (m == 0) {
      first_model_rs = rs;
    } else if (rs.size() >= 2 && first_model_rs.size() >= 2) {
      const TTestResult t = two_sample_t(first_model_rs, rs);
      s.p_value = t.p_value;
      s.significant = t.significant;
    }
    table.rows.push_back(std::move(s));
  }
  single(MethodKind::kReferenceWer);
  return table;
}

std::string render_report_text(const std::vector<ReportTable> &tables) {
  std::vector<std::string> labels;
  for (const auto &t : tables) {
    for (const auto &row : t.rows) {
      if (std::find(labels.begin(), labels.end(), row.row_label()) == labels.end()) {
        labels.push_back(row.row_label());
      }
    }
  }
  // Keep the canonical row order across datasets.
  auto rank = [](const std::string &l) {
    if (l == "speech_rate") return 0;
    if (l == "wada_snr") return 1;
    if (l == "ngram") return 2;
    if (l.rfind("llm:", 0) == 0) return 3;
    return 4;
  };
  std::stable_sort(labels.begin(), labels.end(),
                   [&](const std::string &a, const std::string &b) { return rank(a) < rank(b); });

  std::vector<std::vector<std::string>> grid;
  grid.push_back({""});
  for (const auto &t : tables) grid[0].push_back(t.info.name);
  auto meta = [&](const std::string &name, auto get) {
    std::vector<std::string> row{name};
    for (const auto &t : tables) row.push_back(get(t.info));
    grid.push_back(std::move(row));
  };
  meta("n_spk", [](const DatasetInfo &i) { return std::to_string(i.n_spk); });
  meta("n_spk_time", [](const DatasetInfo &i) { return std::to_string(i.n_spk_time); });
  meta("n_sen", [](const DatasetInfo &i) { return std::to_string(i.n_sen); });
  meta("language", [](const DatasetInfo &i) { return i.language; });
  const size_t header_rows = grid.size();

  for (const auto &label : labels) {
    std::vector<std::string> row{label};
    for (const auto &t : tables) {
      const MethodSummary *found = nullptr;
      const MethodSummary *best = nullptr;
      const MethodSummary *best_free = nullptr;
      for (const auto &r : t.rows) {
        if (r.row_label() == label) found = &r;
        if (!best || std::abs(r.mean_r) > std::abs(best->mean_r)) best = &r;
        const bool proposed = r.kind == MethodKind::kNgram || r.kind == MethodKind::kLlm;
        if (proposed && (!best_free || std::abs(r.mean_r) > std::abs(best_free->mean_r))) {
          best_free = &r;
        }
      }
      if (!t.has_ratings || !found) {
        row.push_back("-");
        continue;
      }
      std::string cell = fmt("%.4f", found->mean_r);
      if (found->ci_halfwidth) cell += "+-" + fmt("%.3f", *found->ci_halfwidth);
      if (found == best) cell = "**" + cell + "**";
      if (found == best_free) cell = "__" + cell + "__";
      if (found->significant) cell += " +";
      row.push_back(cell);
    }
    grid.push_back(std::move(row));
  }

  std::vector<size_t> width(grid[0].size(), 0);
  for (const auto &row : grid) {
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string> &row) {
    std::string s;
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) s += "  ";
      if (c == 0) {
        s += row[c] + std::string(width[c] - row[c].size(), ' ');
      } else {
        s += std::string(width[c] - row[c].size(), ' ') + row[c];
      }
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s + '\n';
  };
  size_t total = 0;
  for (size_t w : width) total += w;
  total += 2 * (width.size() - 1);
  const std::string rule(total, '-');

  std::string out = "Pearson r of speaker-level scores with perceptual ratings\n";
  out += rule + '\n';
  for (size_t i = 0; i < grid.size(); ++i) {
    if (i == header_rows) out += rule + '\n';
    out += line(grid[i]);
  }
  out += rule + '\n';
  out += "** best |r| per column; __ best reference-free proposed method; "
         "+ LLM difference vs first model significant at p < 0.05\n";
  bool any_missing = false;
  for (const auto &t : tables) any_missing |= !t.has_ratings;
  if (any_missing) out += "- : no ratings available, correlation omitted\n";
  for (const auto &t : tables) {
    if (t.info.n_failed > 0) {
      out += t.info.name + ": " + std::to_string(t.info.n_failed) +
             " utterance/method pairs failed and were excluded (see errors.csv)\n";
    }
  }
  return out;
}

std::string report_to_json(const ReportTable &table) {
  nlohmann::ordered_json j;
  j["dataset"] = table.info.name;
  j["language"] = table.info.language;
  j["n_spk"] = table.info.n_spk;
  j["n_spk_time"] = table.info.n_spk_time;
  j["n_sen"] = table.info.n_sen;
  j["n_utterances"] = table.info.n_utterances;
  j["n_failed"] = table.info.n_failed;
  j["has_ratings"] = table.has_ratings;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto &row : table.rows) {
    nlohmann::ordered_json r;
    r["method"] = method_kind_name(row.kind);
    r["model"] = row.model_name;
    r["mean_r"] = row.mean_r;
    r["ci_halfwidth"] = row.ci_halfwidth ? nlohmann::ordered_json(*row.ci_halfwidth) : nullptr;
    r["p_value"] = row.p_value ? nlohmann::ordered_json(*row.p_value) : nullptr;
    r["significant"] = row.significant;
    r["runs"] = nlohmann::ordered_json::array();
    for (const auto &run : row.runs) {
      r["runs"].push_back({{"run_index", run.method.run_index},
                           {"pearson_r", run.pearson_r},
                           {"n_points", run.n_points}});
    }
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

ReportTable report_from_json(const std::string &json_text) {
  ReportTable t;
  try {
    const auto j = nlohmann::json::parse(json_text);
    t.info.name = j.at("dataset").get<std::string>();
    t.info.language = j.at("language").get<std::string>();
    t.info.n_spk = j.at("n_spk").get<int32_t>();
    t.info.n_spk_time = j.at("n_spk_time").get<int32_t>();
    t.info.n_sen = j.at("n_sen").get<int32_t>();
    t.info.n_utterances = j.at("n_utterances").get<int32_t>();
    t.info.n_failed = j.at("n_failed").get<int32_t>();
    t.has_ratings = j.at("has_ratings").get<bool>();
    for (const auto &r : j.at("rows")) {
      MethodSummary s;
      s.kind = parse_method_kind(r.at("method").get<std::string>());
      s.model_name = r.at("model").get<std::string>();
      s.mean_r = r.at("mean_r").get<double>();
      if (!r.at("ci_halfwidth").is_null()) s.ci_halfwidth = r.at("ci_halfwidth").get<double>();
      if (!r.at("p_value").is_null()) s.p_value = r.at("p_value").get<double>();
      s.significant = r.at("significant").get<bool>();
      for (const auto &run : r.at("runs")) {
        RunResult rr;
        rr.method = {s.kind, s.model_name, run.at("run_index").get<int32_t>()};
        rr.pearson_r = run.at("pearson_r").get<double>();
        rr.n_points = run.at("n_points").get<int32_t>();
        s.runs.push_back(rr);
      }
      t.rows.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception &e) {
    fail(ErrorCode::kInvalidArgument, std::string("malformed report summary: ") + e.what());
  }
  return t;
}

LlmAccuracyTable llm_accuracy_report(const std::filesystem::path &run_dir) {
  const Manifest manifest = parse_manifest(read_file(run_dir / "manifest.jsonl"));
  const auto ratings = speaker_ratings(manifest);
  std::string dataset = "dataset";
  if (std::filesystem::exists(run_dir / "config.json")) {
    const auto cfg = nlohmann::json::parse(read_file(run_dir / "config.json"));
    dataset = cfg.value("dataset", dataset);
  }

  struct Utt {
    std::vector<std::string> greedy;
    std::vector<std::string> truth;
    std::map<std::pair<std::string, int32_t>, std::vector<std::string>> llm;
  };
  std::map<std::string, Utt> utts;
  std::vector<std::string> models;
  std::istringstream in(read_file(run_dir / "transcripts.jsonl"));
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto j = nlohmann::json::parse(line);
    if (!j.contains("ground_truth") || j["ground_truth"].is_null() || !j.contains("greedy") ||
        j["greedy"].is_null()) {
      continue;
    }
    Utt u;
    u.greedy = normalize_text(j["greedy"].get<std::string>());
    u.truth = normalize_text(j["ground_truth"].get<std::string>());
    for (const auto &l : j.value("llm", nlohmann::json::array())) {
      const std::string model = l.at("model").get<std::string>();
      if (std::find(models.begin(), models.end(), model) == models.end()) models.push_back(model);
      u.llm[{model, l.at("run_index").get<int32_t>()}] = normalize_text(l.at("text").get<std::string>());
    }
    utts.emplace(j.at("utterance_id").get<std::string>(), std::move(u));
  }
  if (utts.empty()) {
    fail(ErrorCode::kMissingGroundTruth, "no utterance in the run has both ground truth and a greedy transcript");
  }

  LlmAccuracyTable table;
  table.dataset = dataset;
  for (const auto &model : models) {
    std::set<int32_t> run_ids;
    for (const auto &[id, u] : utts) {
      for (const auto &[key, words] : u.llm) {
        if (key.first == model) run_ids.insert(key.second);
      }
    }
    LlmAccuracyRow row;
    row.model_name = model;
    row.runs = static_cast<int32_t>(run_ids.size());
    double micro_sum = 0.0, macro_sum = 0.0, r_sum = 0.0, g_micro = 0.0, g_macro = 0.0;
    int32_t r_count = 0;
    for (int32_t run : run_ids) {
      WerAccumulator llm_acc, greedy_acc;
      std::vector<ScoreRecord> per_utt;
      for (const auto &[id, u] : utts) {
        auto it = u.llm.find({model, run});
        if (it == u.llm.end()) continue;
        const auto a = align_words(it->second, u.truth);
        llm_acc.add(a);
        greedy_acc.add(align_words(u.greedy, u.truth));
        per_utt.push_back({id, {MethodKind::kLlm, model, run}, wer(a), {}, {}});
      }
      micro_sum += llm_acc.micro();
      macro_sum += llm_acc.macro();
      g_micro += greedy_acc.micro();
      g_macro += greedy_acc.macro();
      row.n_utterances = static_cast<int32_t>(llm_acc.utterances());
      const auto speaker = aggregate_speaker(per_utt, manifest, false);
      const auto runs = correlate(speaker, ratings);
      if (!runs.empty()) {
        r_sum += runs.front().pearson_r;
        ++r_count;
      }
    }
    const double n = static_cast<double>(run_ids.size());
    row.llm_wer_micro = micro_sum / n;
    row.llm_wer_macro = macro_sum / n;
    row.greedy_wer_micro = g_micro / n;
    row.greedy_wer_macro = g_macro / n;
    if (r_count > 0) row.r_llm_wer = r_sum / r_count;
    table.rows.push_back(row);
  }
  if (table.rows.empty()) {
    // No LLM references: still report the greedy WER.
    WerAccumulator greedy_acc;
    for (const auto &[id, u] : utts) greedy_acc.add(align_words(u.greedy, u.truth));
    LlmAccuracyRow row;
    row.model_name = "-";
    row.n_utterances = static_cast<int32_t>(greedy_acc.utterances());
    row.greedy_wer_micro = greedy_acc.micro();
    row.greedy_wer_macro = greedy_acc.macro();
    row.llm_wer_micro = row.llm_wer_macro = std::nan("");
    table.rows.push_back(row);
  }
  return table;
}

std::string render_llm_accuracy_text(const std::vector<LlmAccuracyTable> &tables) {
  auto pct = [](double v) { return std::isnan(v) ? std::string("-") : fmt("%.2f%%", 100.0 * v); };
  std::string out = "Word error rate against the ground truth (micro-averaged; macro in parentheses)\n";
  for (const auto &t : tables) {
    for (const auto &row : t.rows) {
      out += t.dataset + " / " + row.model_name + " (" + std::to_string(row.runs) + " runs, " +
             std::to_string(row.n_utterances) + " utterances)\n";
      out += "  W_greedy WER  " + pct(row.greedy_wer_micro) + " (" + pct(row.greedy_wer_macro) + ")\n";
      out += "  W_LLM WER     " + pct(row.llm_wer_micro) + " (" + pct(row.llm_wer_macro) + ")\n";
      out += "  r_W_LLM       " + (row.r_llm_wer ? fmt("%.4f", *row.r_llm_wer) : std::string("-")) + "\n";
    }
  }
  return out;
}

std::string render_llm_accuracy_csv(const LlmAccuracyTable &table) {
  std::string out =
      "dataset,model,runs,n_utterances,greedy_wer_micro,greedy_wer_macro,llm_wer_micro,"
      "llm_wer_macro,r_llm_wer\n";
  for (const auto &row : table.rows) {
    out += table.dataset + "," + row.model_name + "," + std::to_string(row.runs) + "," +
           std::to_string(row.n_utterances) + "," + fmt("%.17g", row.greedy_wer_micro) + "," +
           fmt("%.17g", row.greedy_wer_macro) + "," + fmt("%.17g", row.llm_wer_micro) + "," +
           fmt("%.17g", row.llm_wer_macro) + "," +
           (row.r_llm_wer ? fmt("%.17g", *row.r_llm_wer) : std::string()) + "\n";
  }
  return out;
}

}  // namespace asrinc
