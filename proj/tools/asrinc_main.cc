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

// asrinc command-line tool. Exit codes: 0 success, 1 runtime failure,
// 2 invalid input or configuration.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asrinc/asrinc.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct CliError {
  int exit_code;
};

int exit_code_for(asrinc_status status) {
  if (status == ASRINC_OK) return kExitOk;
  return asrinc_status_is_validation(status) ? kExitValidation : kExitRuntime;
}

void check(asrinc_status status, const std::string &context) {
  if (status == ASRINC_OK) return;
  std::cerr << "asrinc: " << context << ": " << asrinc_status_name(status) << ": "
            << asrinc_last_error() << "\n";
  throw CliError{exit_code_for(status)};
}

[[noreturn]] void usage_error(const std::string &message) {
  std::cerr << "asrinc: " << message << "\nRun with --help for usage.\n";
  throw CliError{kExitValidation};
}

std::string take(char *s) {
  std::string out = s ? s : "";
  asrinc_string_free(s);
  return out;
}

void emit(const std::string &text, const std::string &path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "asrinc: cannot write " << path << "\n";
    throw CliError{kExitRuntime};
  }
  out << text;
}

std::string join(const std::vector<std::string> &items) {
  std::string out;
  for (const auto &s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

struct DecoderFlags {
  double alpha = 0.5;
  double beta = 0.5;
  int beam_width = 100;
  double prune_floor = -20.0;

  void add(CLI::App *app) {
    app->add_option("--alpha", alpha, "LM weight")->capture_default_str();
    app->add_option("--beta", beta, "word insertion bonus")->capture_default_str();
    app->add_option("--beam-width", beam_width, "beam width")->capture_default_str()->check(
        CLI::PositiveNumber);
    app->add_option("--prune-floor", prune_floor, "log-probability pruning floor below the best")
        ->capture_default_str();
  }
  asrinc_decoder_options options() const {
    asrinc_decoder_options o;
    asrinc_decoder_options_init(&o);
    o.alpha = alpha;
    o.beta = beta;
    o.beam_width = beam_width;
    o.prune_logp_floor = prune_floor;
    return o;
  }
};

struct PipelineFlags {
  std::string manifest;
  std::string vocab;
  std::string lm;
  std::string out_dir;
  std::string dataset = "dataset";
  std::string language = "English";
  std::vector<std::string> methods;
  DecoderFlags decoder;
  bool no_norm_check = false;
  double empty_ref_cap = 1.0;
  std::string rate_unit = "wpm";
  int wada_window = 0;
  int wada_hop = 0;
  std::string wada_table;
  std::vector<std::string> models;
  int runs = 3;
  double temperature = 0.0;
  int parallelism = 4;
  bool mock = false;
  std::string mock_table;
  int retries = 3;
  double retry_delay = 0.5;
  int jobs = 1;
  double ci_level = 0.95;

  void add(CLI::App *app, std::vector<std::string> default_methods) {
    methods = std::move(default_methods);
    app->add_option("--manifest", manifest, "utterance manifest (JSON lines)")->required();
    app->add_option("--vocab", vocab, "CTC vocabulary file");
    app->add_option("--lm", lm, "ARPA language model (plain or gzip)");
    app->add_option("--out", out_dir, "run directory to write");
    app->add_option("--dataset", dataset, "dataset label for reports")->capture_default_str();
    app->add_option("--language", language, "language named in the LLM prompt")
        ->capture_default_str();
    app->add_option("--method,--methods", methods,
                    "methods: ngram, llm, reference_wer, speech_rate, wada_snr")
        ->delimiter(',')
        ->capture_default_str();
    decoder.add(app);
    app->add_flag("--no-normalization-check", no_norm_check, "skip posterior row-sum check");
    app->add_option("--empty-ref-cap", empty_ref_cap, "WER cap for empty references")
        ->capture_default_str();
    app->add_option("--speech-rate-unit", rate_unit, "wpm or wps")
        ->check(CLI::IsMember({"wpm", "wps"}))
        ->capture_default_str();
    app->add_option("--wada-window", wada_window, "WADA-SNR frame length in samples (0: whole)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--wada-hop", wada_hop, "WADA-SNR frame hop in samples")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--wada-table", wada_table, "custom WADA-SNR lookup table");
    app->add_option("--model", models, "LLM model name (repeatable)")->delimiter(',');
    app->add_option("--runs", runs, "LLM runs per utterance")->capture_default_str()->check(
        CLI::PositiveNumber);
    app->add_option("--temperature", temperature, "LLM sampling temperature")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app->add_option("--parallelism", parallelism, "concurrent LLM requests")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_flag("--mock", mock, "use the offline mock corrector instead of an endpoint");
    app->add_option("--mock-table", mock_table, "JSON reply table for --mock")
        ->check(CLI::ExistingFile);
    app->add_option("--retries", retries, "LLM retries on transport errors")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app->add_option("--retry-delay", retry_delay, "initial retry delay in seconds")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app->add_option("--jobs", jobs, "worker threads")->capture_default_str()->check(
        CLI::PositiveNumber);
    app->add_option("--ci-level", ci_level, "confidence level of run intervals")
        ->capture_default_str()
        ->check(CLI::Range(0.5, 0.999999));
  }

  // The returned struct points into this object.
  asrinc_pipeline_options options(std::string *methods_list, std::string *models_list) const {
    asrinc_pipeline_options o;
    asrinc_pipeline_options_init(&o);
    *methods_list = join(methods);
    *models_list = join(models);
    o.dataset = dataset.c_str();
    o.language = language.c_str();
    o.methods = methods_list->c_str();
    o.vocab_path = vocab.c_str();
    o.lm_path = lm.c_str();
    o.out_dir = out_dir.c_str();
    o.decoder = decoder.options();
    o.check_normalization = no_norm_check ? 0 : 1;
    o.empty_reference_cap = empty_ref_cap;
    o.speech_rate_per_second = rate_unit == "wps" ? 1 : 0;
    o.wada_window = wada_window;
    o.wada_hop = wada_hop;
    o.wada_table_path = wada_table.empty() ? nullptr : wada_table.c_str();
    o.llm_models = models_list->c_str();
    o.llm_runs = runs;
    o.temperature = temperature;
    o.llm_parallelism = parallelism;
    o.mock = mock ? 1 : 0;
    o.mock_table_path = mock_table.empty() ? nullptr : mock_table.c_str();
    o.retries = retries;
    o.retry_initial_delay_s = retry_delay;
    o.jobs = jobs;
    o.ci_level = ci_level;
    return o;
  }
};

struct RunHandle {
  asrinc_run *run = nullptr;
  ~RunHandle() { asrinc_run_free(run); }
};

void report_quarantine(const asrinc_run *run) {
  const size_t n = asrinc_run_error_count(run);
  if (n == 0) return;
  std::cerr << "asrinc: " << n << " utterance-level failure(s) excluded";
  std::cerr << " (see errors.csv in the run directory)\n";
}

int run_scoring(const PipelineFlags &flags, bool eval, const std::string &output) {
  std::string methods, models;
  asrinc_pipeline_options o = flags.options(&methods, &models);
  o.require_ratings = eval ? 1 : 0;
  o.emit_report = eval ? 1 : 0;
  RunHandle h;
  check(asrinc_run_pipeline(flags.manifest.c_str(), &o, &h.run), "pipeline");
  report_quarantine(h.run);
  char *text = nullptr;
  if (eval) {
    check(asrinc_run_report_text(h.run, &text), "report");
  } else {
    check(asrinc_run_scores_wide_csv(h.run, &text), "scores");
  }
  emit(take(text), output);
  return kExitOk;
}


int run_decode(const std::string &vocab_path, const std::string &manifest_path,
               std::vector<std::string> posterior_paths, bool greedy, bool beam,
               const std::string &lm_path, const DecoderFlags &decoder, bool no_norm_check,
               const std::string &output) {
  if (beam && lm_path.empty()) usage_error("--beam requires --lm");
  if (!greedy && !beam) greedy = true;
  if (manifest_path.empty() == posterior_paths.empty()) {
    usage_error("give either --manifest or posterior files");
  }

  asrinc_vocab *vocab = nullptr;
  check(asrinc_vocab_load(vocab_path.c_str(), &vocab), "vocabulary");
  std::unique_ptr<asrinc_vocab, void (*)(asrinc_vocab *)> vocab_owner(vocab, asrinc_vocab_free);
  asrinc_lm *lm = nullptr;
  if (beam) check(asrinc_lm_load(lm_path.c_str(), &lm), "language model");
  std::unique_ptr<asrinc_lm, void (*)(asrinc_lm *)> lm_owner(lm, asrinc_lm_free);

  if (!manifest_path.empty()) {
    asrinc_manifest *m = nullptr;
    check(asrinc_manifest_load(manifest_path.c_str(), &m), "manifest");
    std::unique_ptr<asrinc_manifest, void (*)(asrinc_manifest *)> owner(m, asrinc_manifest_free);
    for (size_t i = 0; i < asrinc_manifest_size(m); ++i) {
      char *p = nullptr;
      check(asrinc_manifest_posterior_path(m, i, &p), "manifest");
      posterior_paths.push_back(take(p));
    }
  }

  const asrinc_decoder_options opts = decoder.options();
  std::string out = "utterance_id";
  if (greedy) out += "\tgreedy";
  if (beam) out += "\tbeam";
  out += "\n";
  int status = kExitOk;
  for (const auto &path : posterior_paths) {
    asrinc_posteriors *post = nullptr;
    asrinc_status st = asrinc_posteriors_load(path.c_str(), vocab, no_norm_check ? 0 : 1, &post);
    if (st != ASRINC_OK) {
      std::cerr << "asrinc: " << path << ": " << asrinc_status_name(st) << ": "
                << asrinc_last_error() << "\n";
      status = std::max(status, exit_code_for(st));
      continue;
    }
    std::unique_ptr<asrinc_posteriors, void (*)(asrinc_posteriors *)> owner(post,
                                                                            asrinc_posteriors_free);
    std::string line = asrinc_posteriors_id(post);
    char *text = nullptr;
    if (greedy) {
      check(asrinc_decode_greedy(post, vocab, &text), path);
      line += "\t" + take(text);
    }
    if (beam) {
      check(asrinc_decode_beam(post, vocab, lm, &opts, &text, nullptr), path);
      line += "\t" + take(text);
    }
    out += line + "\n";
  }
  emit(out, output);
  return status;
}

int run_report(const std::vector<std::string> &dirs, bool audit, const std::string &output) {
  if (audit) {
    int all_equal = 1;
    for (const auto &d : dirs) {
      int equal = 0;
      check(asrinc_audit_replay(d.c_str(), &equal), d);
      std::cerr << d << ": audit " << (equal ? "ok" : "MISMATCH") << "\n";
      all_equal &= equal;
    }
    if (!all_equal) return kExitRuntime;
  }
  std::vector<const char *> ptrs;
  for (const auto &d : dirs) ptrs.push_back(d.c_str());
  char *text = nullptr;
  check(asrinc_render_report(ptrs.data(), ptrs.size(), &text), "report");
  emit(take(text), output);
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"asrinc: reference-free intelligibility scoring from ASR inconsistency"};
  app.require_subcommand(1);
  app.set_version_flag("--version", asrinc_version());

  // decode
  CLI::App *decode = app.add_subcommand("decode", "greedy and LM-fused beam decoding");
  std::string d_vocab, d_manifest, d_lm, d_output;
  std::vector<std::string> d_posteriors;
  bool d_greedy = false, d_beam = false, d_no_norm = false;
  DecoderFlags d_decoder;
  decode->add_option("--vocab", d_vocab, "CTC vocabulary file")->required();
  decode->add_option("--manifest", d_manifest, "decode every utterance of a manifest");
  decode->add_option("posteriors", d_posteriors, "posterior matrix files");
  decode->add_flag("--greedy", d_greedy, "emit the greedy transcript (default)");
  decode->add_flag("--beam", d_beam, "emit the LM-fused beam transcript");
  decode->add_option("--lm", d_lm, "ARPA language model (plain or gzip)");
  d_decoder.add(decode);
  decode->add_flag("--no-normalization-check", d_no_norm, "skip posterior row-sum check");
  decode->add_option("-o,--output", d_output, "write to a file instead of stdout");

  // score
  CLI::App *score = app.add_subcommand("score", "per-utterance inconsistency scores");
  PipelineFlags s_flags;
  std::string s_output;
  s_flags.add(score, {"ngram"});
  score->add_option("-o,--output", s_output, "write the score table to a file");

  // eval
  CLI::App *eval = app.add_subcommand("eval", "correlate speaker scores with ratings");
  PipelineFlags e_flags;
  std::string e_output;
  e_flags.add(eval, {"speech_rate", "wada_snr", "ngram"});
  eval->add_option("-o,--output", e_output, "write the report to a file");

  // baselines
  CLI::App *baselines = app.add_subcommand("baselines", "speech rate and WADA-SNR scores");
  PipelineFlags b_flags;
  std::string b_output;
  b_flags.add(baselines, {"speech_rate", "wada_snr"});
  baselines->add_option("-o,--output", b_output, "write the score table to a file");

  // report
  CLI::App *report = app.add_subcommand("report", "render a report from run directories");
  std::vector<std::string> r_dirs;
  bool r_audit = false;
  std::string r_output;
  report->add_option("run_dirs", r_dirs, "run directories written by eval")->required();
  report->add_flag("--audit", r_audit, "recompute report.csv from scores.csv first");
  report->add_option("-o,--output", r_output, "write the report to a file");

  // synth
  CLI::App *synth = app.add_subcommand("synth", "write the synthetic evaluation fixture");
  asrinc_fixture_options f_opts;
  asrinc_fixture_options_init(&f_opts);
  std::string f_dir;
  bool f_no_audio = false;
  synth->add_option("--out", f_dir, "output directory")->required();
  synth->add_option("--speakers", f_opts.speakers, "number of speakers")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--noise-step", f_opts.noise_step, "noise rate increment per speaker")
      ->capture_default_str();
  synth->add_option("--utterances", f_opts.utterances_per_speaker, "utterances per speaker")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--words", f_opts.words_per_utterance, "words per utterance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", f_opts.seed, "random seed")->capture_default_str();
  synth->add_option("--sample-rate", f_opts.sample_rate_hz, "audio sample rate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_flag("--no-audio", f_no_audio, "skip WAV files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*decode) {
      return run_decode(d_vocab, d_manifest, d_posteriors, d_greedy, d_beam, d_lm, d_decoder,
                        d_no_norm, d_output);
    }
    if (*score) return run_scoring(s_flags, false, s_output);
    if (*eval) return run_scoring(e_flags, true, e_output);
    if (*baselines) return run_scoring(b_flags, false, b_output);
    if (*report) return run_report(r_dirs, r_audit, r_output);
    if (*synth) {
      if (f_no_audio) f_opts.write_audio = 0;
      check(asrinc_generate_fixture(f_dir.c_str(), &f_opts), "synth");
      return kExitOk;
    }
  } catch (const CliError &e) {
    return e.exit_code;
  }
  return kExitValidation;
}
