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

#include "asrinc/asrinc.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <thread>

#include "alignment.h"
#include "baselines.h"
#include "ctc_decoder.h"
#include "error.h"
#include "harness.h"
#include "manifest.h"
#include "ngram_lm.h"
#include "pipeline.h"
#include "posteriors.h"
#include "reference_gen.h"
#include "synth.h"
#include "text.h"
#include "vocabulary.h"
#include "wav.h"

using namespace asrinc;

struct asrinc_vocab {
  Vocabulary value;
};
struct asrinc_posteriors {
  PosteriorMatrix value;
};
struct asrinc_lm {
  NGramModel value;
};
struct asrinc_manifest {
  Manifest value;
};
struct asrinc_run {
  Manifest manifest;
  PipelineConfig config;
  PipelineResult result;
  bool has_report = false;
};

namespace {

thread_local std::string g_last_error;

asrinc_status to_status(ErrorCode code) { return static_cast<asrinc_status>(code); }

template <typename Fn>
asrinc_status guarded(Fn &&fn) {
  try {
    fn();
    g_last_error.clear();
    return ASRINC_OK;
  } catch (const Error &e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc &) {
    g_last_error = "out of memory";
    return ASRINC_INTERNAL;
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return ASRINC_INTERNAL;
  }
}

void require(const void *p, const char *what) {
  if (!p) fail(ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

void put_string(char **out, const std::string &s) {
  require(out, "output pointer");
  *out = dup_string(s);
}

std::string opt_str(const char *s) { return s ? std::string(s) : std::string(); }

std::vector<std::string> split_list(const char *s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(opt_str(s));
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string read_all(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DecoderConfig decoder_config(const asrinc_decoder_options *options) {
  DecoderConfig cfg;
  if (options) {
    cfg.alpha = options->alpha;
    cfg.beta = options->beta;
    cfg.beam_width = options->beam_width;
    cfg.prune_logp_floor = options->prune_logp_floor;
  }
  return cfg;
}

}  // namespace

extern "C" {

const char *asrinc_version(void) { return "1.0.0"; }

const char *asrinc_status_name(asrinc_status status) {
  if (status < ASRINC_OK || status > ASRINC_INTERNAL) return "Unknown";
  return error_code_name(static_cast<ErrorCode>(status)).data();
}

int asrinc_status_is_validation(asrinc_status status) {
  if (status < ASRINC_OK || status > ASRINC_INTERNAL) return 0;
  return is_validation_error(static_cast<ErrorCode>(status)) ? 1 : 0;
}

const char *asrinc_last_error(void) { return g_last_error.c_str(); }

void asrinc_string_free(char *str) { std::free(str); }

asrinc_status asrinc_vocab_load(const char *path, asrinc_vocab **out) {
  return guarded([&] {
    require(path, "path");
    require(out, "output pointer");
    *out = nullptr;
    *out = new asrinc_vocab{load_vocabulary(path)};
  });
}

asrinc_status asrinc_vocab_parse(const char *text, asrinc_vocab **out) {
  return guarded([&] {
    require(text, "text");
    require(out, "output pointer");
    *out = nullptr;
    *out = new asrinc_vocab{parse_vocabulary(text)};
  });
}

int32_t asrinc_vocab_size(const asrinc_vocab *vocab) { return vocab ? vocab->value.size() : 0; }

void asrinc_vocab_free(asrinc_vocab *vocab) { delete vocab; }

asrinc_status asrinc_posteriors_load(const char *path, const asrinc_vocab *vocab,
                                     int check_normalization, asrinc_posteriors **out) {
  return guarded([&] {
    require(path, "path");
    require(vocab, "vocab");
    require(out, "output pointer");
    *out = nullptr;
    PosteriorValidation validation;
    validation.check_normalization = check_normalization != 0;
    *out = new asrinc_posteriors{load_posteriors(path, vocab->value, validation)};
  });
}

asrinc_status asrinc_posteriors_create(const char *utterance_id, int32_t frames, int32_t vocab_size,
                                       const double *log_probs, int check_normalization,
                                       asrinc_posteriors **out) {
  return guarded([&] {
    require(out, "output pointer");
    *out = nullptr;
    if (frames < 0 || vocab_size <= 0) fail(ErrorCode::kMalformedMatrix, "invalid matrix shape");
    if (frames > 0) require(log_probs, "log_probs");
    std::vector<double> data(log_probs, log_probs + static_cast<size_t>(frames) * vocab_size);
    PosteriorValidation validation;
    validation.check_normalization = check_normalization != 0;
    *out = new asrinc_posteriors{
        PosteriorMatrix(opt_str(utterance_id), frames, vocab_size, std::move(data), validation)};
  });
}

int32_t asrinc_posteriors_frames(const asrinc_posteriors *post) {
  return post ? post->value.frame_count() : 0;
}

const char *asrinc_posteriors_id(const asrinc_posteriors *post) {
  return post ? post->value.utterance_id().c_str() : "";
}

void asrinc_posteriors_free(asrinc_posteriors *post) { delete post; }

asrinc_status asrinc_lm_load(const char *path, asrinc_lm **out) {
  return guarded([&] {
    require(path, "path");
    require(out, "output pointer");
    *out = nullptr;
    *out = new asrinc_lm{load_arpa(path)};
  });
}

asrinc_status asrinc_lm_parse(const char *arpa_text, asrinc_lm **out) {
  return guarded([&] {
    require(arpa_text, "arpa_text");
    require(out, "output pointer");
    *out = nullptr;
    *out = new asrinc_lm{parse_arpa(arpa_text)};
  });
}

int32_t asrinc_lm_order(const asrinc_lm *lm) { return lm ? lm->value.order() : 0; }

asrinc_status asrinc_lm_word_logprob(const asrinc_lm *lm, const char *history, const char *word,
                                     double *out) {
  return guarded([&] {
    require(lm, "lm");
    require(word, "word");
    require(out, "output pointer");
    std::vector<std::string> words;
    std::istringstream in(opt_str(history));
    for (std::string w; in >> w;) words.push_back(w);
    *out = lm->value.word_logprob(word, words);
  });
}

asrinc_status asrinc_lm_sentence_logprob(const asrinc_lm *lm, const char *sentence, double *out) {
  return guarded([&] {
    require(lm, "lm");
    require(sentence, "sentence");
    require(out, "output pointer");
    const Transcript t = Transcript::from_text(sentence, TranscriptSource::kGroundTruth);
    *out = lm->value.sequence_logprob(t.words);
  });
}

void asrinc_lm_free(asrinc_lm *lm) { delete lm; }

void asrinc_decoder_options_init(asrinc_decoder_options *options) {
  if (!options) return;
  const DecoderConfig defaults;
  options->alpha = defaults.alpha;
  options->beta = defaults.beta;
  options->beam_width = defaults.beam_width;
  options->prune_logp_floor = defaults.prune_logp_floor;
}

asrinc_status asrinc_decode_greedy(const asrinc_posteriors *post, const asrinc_vocab *vocab,
                                   char **out_text) {
  return guarded([&] {
    require(post, "posteriors");
    require(vocab, "vocab");
    put_string(out_text, collapse(greedy_decode(post->value), vocab->value).text());
  });
}

asrinc_status asrinc_decode_beam(const asrinc_posteriors *post, const asrinc_vocab *vocab,
                                 const asrinc_lm *lm, const asrinc_decoder_options *options,
                                 char **out_text, double *out_score) {
  return guarded([&] {
    require(post, "posteriors");
    require(vocab, "vocab");
    require(out_text, "output pointer");
    const auto hyps = beam_search(post->value, vocab->value, lm ? &lm->value : nullptr,
                                  decoder_config(options));
    const auto words = labels_to_words(hyps.front().prefix, vocab->value);
    put_string(out_text, join_words(words));
    if (out_score) *out_score = hyps.front().fused_score;
  });
}

asrinc_status asrinc_wer(const char *hyp, const char *ref, double *out) {
  return guarded([&] {
    require(hyp, "hyp");
    require(ref, "ref");
    require(out, "output pointer");
    *out = wer(align_words(Transcript::from_text(hyp, TranscriptSource::kGreedy).words,
                           Transcript::from_text(ref, TranscriptSource::kGroundTruth).words));
  });
}

asrinc_status asrinc_diff_text(const char *hyp, const char *ref, char **out) {
  return guarded([&] {
    require(hyp, "hyp");
    require(ref, "ref");
    const auto h = Transcript::from_text(hyp, TranscriptSource::kGreedy).words;
    const auto r = Transcript::from_text(ref, TranscriptSource::kGroundTruth).words;
    put_string(out, render_diff_text(align_words(h, r)));
  });
}

asrinc_status asrinc_normalize_text(const char *text, char **out) {
  return guarded([&] {
    require(text, "text");
    put_string(out, join_words(normalize_text(text)));
  });
}

asrinc_status asrinc_build_prompt(const char *language, const char *sentence, char **out) {
  return guarded([&] {
    require(language, "language");
    require(sentence, "sentence");
    put_string(out, build_prompt(Language::parse(language), sentence));
  });
}

asrinc_status asrinc_extract_bracketed(const char *reply, char **out, int *out_fallback) {
  return guarded([&] {
    require(reply, "reply");
    const auto [text, how] = extract_bracketed(reply);
    put_string(out, text);
    if (out_fallback) *out_fallback = how == Extraction::kFallbackWholeReply ? 1 : 0;
  });
}

asrinc_status asrinc_wada_snr(const double *samples, size_t count, double *out_db) {
  return guarded([&] {
    if (count > 0) require(samples, "samples");
    require(out_db, "output pointer");
    *out_db = wada_snr_db(std::vector<double>(samples, samples + count));
  });
}

asrinc_status asrinc_wada_snr_file(const char *wav_path, double *out_db) {
  return guarded([&] {
    require(wav_path, "path");
    require(out_db, "output pointer");
    *out_db = wada_snr_db(read_wav(wav_path).samples);
  });
}

asrinc_status asrinc_manifest_load(const char *path, asrinc_manifest **out) {
  return guarded([&] {
    require(path, "path");
    require(out, "output pointer");
    *out = nullptr;
    *out = new asrinc_manifest{load_manifest(path)};
  });
}

size_t asrinc_manifest_size(const asrinc_manifest *manifest) {
  return manifest ? manifest->value.records.size() : 0;
}

const char *asrinc_manifest_utterance_id(const asrinc_manifest *manifest, size_t i) {
  if (!manifest || i >= manifest->value.records.size()) return nullptr;
  return manifest->value.records[i].utterance_id.c_str();
}

asrinc_status asrinc_manifest_posterior_path(const asrinc_manifest *manifest, size_t i,
                                             char **out) {
  return guarded([&] {
    require(manifest, "manifest");
    if (i >= manifest->value.records.size()) fail(ErrorCode::kInvalidArgument, "index out of range");
    put_string(out, manifest->value.resolve(manifest->value.records[i].posterior_path).string());
  });
}

void asrinc_manifest_free(asrinc_manifest *manifest) { delete manifest; }

void asrinc_pipeline_options_init(asrinc_pipeline_options *options) {
  if (!options) return;
  std::memset(options, 0, sizeof(*options));
  const PipelineConfig defaults;
  options->dataset = "dataset";
  options->language = "English";
  options->methods = "ngram";
  asrinc_decoder_options_init(&options->decoder);
  options->check_normalization = 1;
  options->empty_reference_cap = defaults.wer.empty_reference_cap;
  options->llm_runs = defaults.llm_runs;
  options->temperature = defaults.temperature;
  options->llm_parallelism = defaults.llm_parallelism;
  options->retries = defaults.retry.max_retries;
  options->retry_initial_delay_s = static_cast<double>(defaults.retry.initial_delay.count()) / 1000.0;
  options->jobs = defaults.jobs;
  options->ci_level = defaults.ci_level;
  options->emit_report = 1;
}

asrinc_status asrinc_run_pipeline(const char *manifest_path, const asrinc_pipeline_options *options,
                                  asrinc_run **out) {
  return guarded([&] {
    require(manifest_path, "manifest path");
    require(options, "options");
    require(out, "output pointer");
    *out = nullptr;
    auto run = std::make_unique<asrinc_run>();
    PipelineConfig &cfg = run->config;

    cfg.dataset = opt_str(options->dataset);
    if (cfg.dataset.empty()) cfg.dataset = "dataset";
    cfg.language = Language::parse(options->language ? options->language : "English");
    for (const auto &m : split_list(options->methods)) cfg.methods.insert(parse_method_kind(m));
    cfg.decoder = decoder_config(&options->decoder);
    cfg.validation.check_normalization = options->check_normalization != 0;
    cfg.wer.empty_reference_cap = options->empty_reference_cap;
    cfg.baselines.speech_rate_unit = options->speech_rate_per_second
                                         ? SpeechRateUnit::kWordsPerSecond
                                         : SpeechRateUnit::kWordsPerMinute;
    if (options->wada_window < 0 || options->wada_hop < 0) {
      fail(ErrorCode::kInvalidArgument, "WADA window and hop must be >= 0");
    }
    cfg.baselines.wada_window = static_cast<size_t>(options->wada_window);
    cfg.baselines.wada_hop = static_cast<size_t>(options->wada_hop);
    std::optional<WadaTable> table;
    if (options->wada_table_path && *options->wada_table_path) {
      table = WadaTable::load(options->wada_table_path);
      cfg.baselines.wada_table = &*table;
    }
    cfg.llm_runs = options->llm_runs;
    cfg.temperature = options->temperature;
    cfg.llm_parallelism = options->llm_parallelism;
    cfg.retry.max_retries = options->retries;
    cfg.retry.initial_delay = std::chrono::milliseconds(
        static_cast<int64_t>(std::llround(options->retry_initial_delay_s * 1000.0)));
    cfg.jobs = options->jobs;
    cfg.ci_level = options->ci_level;
    cfg.require_ratings = options->require_ratings != 0;
    cfg.emit_report = options->emit_report != 0;
    cfg.out_dir = opt_str(options->out_dir);

    run->manifest = load_manifest(manifest_path);

    std::optional<Vocabulary> vocab;
    std::optional<NGramModel> lm;
    std::unique_ptr<Corrector> corrector;
    const bool needs_vocab = cfg.methods.count(MethodKind::kNgram) ||
                             cfg.methods.count(MethodKind::kLlm) ||
                             cfg.methods.count(MethodKind::kReferenceWer);
    if (needs_vocab) {
      if (!options->vocab_path || !*options->vocab_path) {
        fail(ErrorCode::kMissingConfiguration, "a vocabulary is required for decoding methods");
      }
      vocab.emplace(load_vocabulary(options->vocab_path));
    }
    if (cfg.methods.count(MethodKind::kNgram)) {
      if (!options->lm_path || !*options->lm_path) {
        fail(ErrorCode::kMissingConfiguration, "the ngram method requires a language model");
      }
      lm.emplace(load_arpa(options->lm_path));
    }
    std::vector<std::string> models = split_list(options->llm_models);
    if (cfg.methods.count(MethodKind::kLlm)) {
      if (options->mock) {
        if (options->mock_table_path && *options->mock_table_path) {
          corrector = MockCorrector::load(options->mock_table_path);
        } else {
          corrector = std::make_unique<MockCorrector>();
        }
        if (models.empty()) models.push_back("mock");
      } else {
        std::string env_model;
        HttpCorrectorConfig http = http_config_from_env(&env_model);
        if (models.empty()) models.push_back(env_model);
        corrector = std::make_unique<HttpCorrector>(std::move(http));
      }
    }
    if (!models.empty()) cfg.llm_models = models;

    PipelineAssets assets;
    assets.vocab = vocab ? &*vocab : nullptr;
    assets.lm = lm ? &*lm : nullptr;
    assets.corrector = corrector.get();
    run->result = run_pipeline(run->manifest, assets, cfg);
    run->has_report = cfg.emit_report;
    cfg.baselines.wada_table = nullptr;
    *out = run.release();
  });
}

size_t asrinc_run_record_count(const asrinc_run *run) { return run ? run->result.records.size() : 0; }

size_t asrinc_run_error_count(const asrinc_run *run) { return run ? run->result.errors.size() : 0; }

asrinc_status asrinc_run_scores_csv(const asrinc_run *run, char **out) {
  return guarded([&] {
    require(run, "run");
    put_string(out, scores_csv(run->manifest, run->result.records));
  });
}

asrinc_status asrinc_run_scores_wide_csv(const asrinc_run *run, char **out) {
  return guarded([&] {
    require(run, "run");
    put_string(out, scores_wide_csv(run->manifest, run->result.records));
  });
}

asrinc_status asrinc_run_errors_csv(const asrinc_run *run, char **out) {
  return guarded([&] {
    require(run, "run");
    std::string csv = "utterance_id,method,code,message\n";
    for (const auto &e : run->result.errors) {
      csv += csv_field(e.utterance_id) + ',' + csv_field(e.method) + ',' +
             std::string(error_code_name(e.code)) + ',' + csv_field(e.message) + '\n';
    }
    put_string(out, csv);
  });
}

asrinc_status asrinc_run_report_text(const asrinc_run *run, char **out) {
  return guarded([&] {
    require(run, "run");
    put_string(out, render_report_text({run->result.report}));
  });
}

void asrinc_run_free(asrinc_run *run) { delete run; }

asrinc_status asrinc_render_report(const char *const *run_dirs, size_t count, char **out) {
  return guarded([&] {
    if (count == 0) fail(ErrorCode::kInvalidArgument, "no run directory given");
    require(run_dirs, "run_dirs");
    std::vector<ReportTable> tables;
    std::vector<LlmAccuracyTable> accuracy;
    for (size_t i = 0; i < count; ++i) {
      require(run_dirs[i], "run directory");
      const std::filesystem::path dir(run_dirs[i]);
      tables.push_back(report_from_json(read_all(dir / "summary.json")));
      if (std::filesystem::exists(dir / "llm_accuracy.csv")) {
        accuracy.push_back(llm_accuracy_report(dir));
      }
    }
    std::string text = render_report_text(tables);
    if (!accuracy.empty()) text += "\n" + render_llm_accuracy_text(accuracy);
    put_string(out, text);
  });
}

asrinc_status asrinc_audit_replay(const char *run_dir, int *out_equal) {
  return guarded([&] {
    require(run_dir, "run_dir");
    require(out_equal, "output pointer");
    *out_equal = audit_replay(run_dir) ? 1 : 0;
  });
}

void asrinc_fixture_options_init(asrinc_fixture_options *options) {
  if (!options) return;
  const SynthConfig defaults;
  options->speakers = defaults.speakers;
  options->noise_step = defaults.noise_step;
  options->utterances_per_speaker = defaults.utterances_per_speaker;
  options->words_per_utterance = defaults.words_per_utterance;
  options->seed = defaults.seed;
  options->sample_rate_hz = defaults.sample_rate_hz;
  options->write_audio = defaults.write_audio ? 1 : 0;
}

asrinc_status asrinc_generate_fixture(const char *dir, const asrinc_fixture_options *options) {
  return guarded([&] {
    require(dir, "dir");
    SynthConfig cfg;
    if (options) {
      cfg.speakers = options->speakers;
      cfg.noise_step = options->noise_step;
      cfg.utterances_per_speaker = options->utterances_per_speaker;
      cfg.words_per_utterance = options->words_per_utterance;
      cfg.seed = options->seed;
      cfg.sample_rate_hz = options->sample_rate_hz;
      cfg.write_audio = options->write_audio != 0;
    }
    generate_fixture(dir, cfg);
  });
}

}  // extern "C"
