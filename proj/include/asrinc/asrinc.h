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

/* C interface to the asrinc library: CTC decoding, n-gram and LLM reference
 * generation, inconsistency scoring, baselines and the evaluation harness.
 *
 * Conventions:
 *   - Every fallible call returns asrinc_status; ASRINC_OK is zero.
 *   - On failure asrinc_last_error() holds a message for the calling thread.
 *   - Strings returned through char** are owned by the caller and released
 *     with asrinc_string_free().
 *   - Handles are released with their matching *_free() function; passing
 *     NULL to a free function is a no-op.
 *   - Functions that create a handle set *out to NULL when they fail.
 *   - Read-only handles may be shared between threads.
 */

#ifndef ASRINC_ASRINC_H_
#define ASRINC_ASRINC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(ASRINC_BUILDING_LIBRARY)
#define ASRINC_API __attribute__((visibility("default")))
#else
#define ASRINC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum asrinc_status {
  ASRINC_OK = 0,
  ASRINC_INVALID_ARGUMENT = 1,
  ASRINC_IO_ERROR = 2,
  ASRINC_EMPTY_FILE = 3,
  ASRINC_DUPLICATE_SYMBOL = 4,
  ASRINC_MISSING_BLANK = 5,
  ASRINC_MISSING_DELIMITER = 6,
  ASRINC_INVALID_SYMBOL = 7,
  ASRINC_BAD_MAGIC = 8,
  ASRINC_UNSUPPORTED_VERSION = 9,
  ASRINC_TRUNCATED_FILE = 10,
  ASRINC_MALFORMED_MATRIX = 11,
  ASRINC_DIMENSION_MISMATCH = 12,
  ASRINC_NON_FINITE_ENTRY = 13,
  ASRINC_POSITIVE_ENTRY = 14,
  ASRINC_ROW_NOT_NORMALIZED = 15,
  ASRINC_MALFORMED_MANIFEST = 16,
  ASRINC_DUPLICATE_UTTERANCE = 17,
  ASRINC_MISSING_DURATION = 18,
  ASRINC_NON_POSITIVE_DURATION = 19,
  ASRINC_NOT_WAV = 20,
  ASRINC_NON_MONO_AUDIO = 21,
  ASRINC_UNSUPPORTED_ENCODING = 22,
  ASRINC_EMPTY_BEAM = 23,
  ASRINC_MALFORMED_ARPA = 24,
  ASRINC_COUNT_MISMATCH = 25,
  ASRINC_MISSING_SECTION = 26,
  ASRINC_TRUNCATED_MODEL = 27,
  ASRINC_INVALID_BACKOFF = 28,
  ASRINC_EMPTY_SEQUENCE = 29,
  ASRINC_EMPTY_REPLY = 30,
  ASRINC_EMPTY_SENTENCE = 31,
  ASRINC_TRANSPORT_ERROR = 32,
  ASRINC_AUTH_ERROR = 33,
  ASRINC_RATE_LIMITED = 34,
  ASRINC_UNKNOWN_METHOD = 35,
  ASRINC_UNKNOWN_LANGUAGE = 36,
  ASRINC_MISSING_GROUND_TRUTH = 37,
  ASRINC_SILENT_AUDIO = 38,
  ASRINC_INVALID_TABLE = 39,
  ASRINC_EMPTY_GROUP = 40,
  ASRINC_DEGENERATE_VARIANCE = 41,
  ASRINC_LENGTH_MISMATCH = 42,
  ASRINC_TOO_FEW_VALUES = 43,
  ASRINC_MISSING_RATINGS = 44,
  ASRINC_RATING_CONFLICT = 45,
  ASRINC_NO_UTTERANCES_SUCCEEDED = 46,
  ASRINC_MISSING_CONFIGURATION = 47,
  ASRINC_INTERNAL = 48,
} asrinc_status;

typedef struct asrinc_vocab asrinc_vocab;
typedef struct asrinc_posteriors asrinc_posteriors;
typedef struct asrinc_lm asrinc_lm;
typedef struct asrinc_manifest asrinc_manifest;
typedef struct asrinc_run asrinc_run;

/* ---- General ---- */

ASRINC_API const char *asrinc_version(void);
ASRINC_API const char *asrinc_status_name(asrinc_status status);
/* Nonzero for input and configuration errors (CLI exit code 2). */
ASRINC_API int asrinc_status_is_validation(asrinc_status status);
ASRINC_API const char *asrinc_last_error(void);
ASRINC_API void asrinc_string_free(char *str);

/* ---- Vocabulary ---- */

ASRINC_API asrinc_status asrinc_vocab_load(const char *path, asrinc_vocab **out);
ASRINC_API asrinc_status asrinc_vocab_parse(const char *text, asrinc_vocab **out);
ASRINC_API int32_t asrinc_vocab_size(const asrinc_vocab *vocab);
ASRINC_API void asrinc_vocab_free(asrinc_vocab *vocab);

/* ---- Posterior matrices ---- */

/* Loads a binary CTCP or text matrix; the column count must match vocab. */
ASRINC_API asrinc_status asrinc_posteriors_load(const char *path, const asrinc_vocab *vocab,
                                                int check_normalization,
                                                asrinc_posteriors **out);
/* log_probs holds frames * vocab_size natural-log values, row major. */
ASRINC_API asrinc_status asrinc_posteriors_create(const char *utterance_id, int32_t frames,
                                                  int32_t vocab_size, const double *log_probs,
                                                  int check_normalization,
                                                  asrinc_posteriors **out);
ASRINC_API int32_t asrinc_posteriors_frames(const asrinc_posteriors *post);
ASRINC_API const char *asrinc_posteriors_id(const asrinc_posteriors *post);
ASRINC_API void asrinc_posteriors_free(asrinc_posteriors *post);

/* ---- N-gram language model ---- */

/* Reads an ARPA file, gzip-compressed or plain. */
ASRINC_API asrinc_status asrinc_lm_load(const char *path, asrinc_lm **out);
ASRINC_API asrinc_status asrinc_lm_parse(const char *arpa_text, asrinc_lm **out);
ASRINC_API int32_t asrinc_lm_order(const asrinc_lm *lm);
/* Natural-log P(word | history); history is space separated, may be empty. */
ASRINC_API asrinc_status asrinc_lm_word_logprob(const asrinc_lm *lm, const char *history,
                                                const char *word, double *out);
/* Natural-log probability of a sentence including boundary symbols. */
ASRINC_API asrinc_status asrinc_lm_sentence_logprob(const asrinc_lm *lm, const char *sentence,
                                                    double *out);
ASRINC_API void asrinc_lm_free(asrinc_lm *lm);

/* ---- Decoding ---- */

typedef struct asrinc_decoder_options {
  double alpha;
  double beta;
  int32_t beam_width;
  double prune_logp_floor;
} asrinc_decoder_options;

ASRINC_API void asrinc_decoder_options_init(asrinc_decoder_options *options);

ASRINC_API asrinc_status asrinc_decode_greedy(const asrinc_posteriors *post,
                                              const asrinc_vocab *vocab, char **out_text);
/* lm may be NULL (acoustic-only search). out_score receives the fused score
 * of the best hypothesis and may be NULL. */
ASRINC_API asrinc_status asrinc_decode_beam(const asrinc_posteriors *post,
                                            const asrinc_vocab *vocab, const asrinc_lm *lm,
                                            const asrinc_decoder_options *options,
                                            char **out_text, double *out_score);

/* ---- Text comparison ---- */

/* Word error rate of hyp against ref after normalization. */
ASRINC_API asrinc_status asrinc_wer(const char *hyp, const char *ref, double *out);
/* Two-line HYP/REF rendering with changed words marked. */
ASRINC_API asrinc_status asrinc_diff_text(const char *hyp, const char *ref, char **out);
ASRINC_API asrinc_status asrinc_normalize_text(const char *text, char **out);

/* ---- Reference generation helpers ---- */

ASRINC_API asrinc_status asrinc_build_prompt(const char *language, const char *sentence,
                                             char **out);
/* Extracts the first bracketed span; *out_fallback is set when the whole
 * reply was used instead. out_fallback may be NULL. */
ASRINC_API asrinc_status asrinc_extract_bracketed(const char *reply, char **out,
                                                  int *out_fallback);

/* ---- Baselines ---- */

ASRINC_API asrinc_status asrinc_wada_snr(const double *samples, size_t count, double *out_db);
ASRINC_API asrinc_status asrinc_wada_snr_file(const char *wav_path, double *out_db);

/* ---- Manifest ---- */

ASRINC_API asrinc_status asrinc_manifest_load(const char *path, asrinc_manifest **out);
ASRINC_API size_t asrinc_manifest_size(const asrinc_manifest *manifest);
ASRINC_API const char *asrinc_manifest_utterance_id(const asrinc_manifest *manifest, size_t i);
/* Posterior path resolved against the manifest directory. */
ASRINC_API asrinc_status asrinc_manifest_posterior_path(const asrinc_manifest *manifest, size_t i,
                                                        char **out);
ASRINC_API void asrinc_manifest_free(asrinc_manifest *manifest);

/* ---- Evaluation pipeline ---- */

typedef struct asrinc_pipeline_options {
  const char *dataset;        /* report label */
  const char *language;       /* Dutch, English, Spanish or any name */
  const char *methods;        /* comma list: ngram,llm,reference_wer,speech_rate,wada_snr */
  const char *vocab_path;     /* needed by ngram, llm, reference_wer */
  const char *lm_path;        /* needed by ngram */
  const char *out_dir;        /* NULL or empty: nothing is written */
  asrinc_decoder_options decoder;
  int check_normalization;
  double empty_reference_cap;
  int speech_rate_per_second; /* 0: words per minute */
  int32_t wada_window;        /* samples; 0: whole signal */
  int32_t wada_hop;           /* samples */
  const char *wada_table_path; /* NULL: built-in table */
  const char *llm_models;     /* comma list */
  int32_t llm_runs;
  double temperature;
  int32_t llm_parallelism;
  int mock;                   /* use the offline mock corrector */
  const char *mock_table_path; /* JSON reply table for the mock; NULL echoes */
  int32_t retries;
  double retry_initial_delay_s;
  int32_t jobs;
  double ci_level;
  int require_ratings;
  int emit_report;
} asrinc_pipeline_options;

ASRINC_API void asrinc_pipeline_options_init(asrinc_pipeline_options *options);

/* Runs scoring (and the report when ratings exist). Without mock, the LLM
 * endpoint is read from LLM_ENDPOINT_URL, LLM_API_KEY and LLM_MODEL_NAME. */
ASRINC_API asrinc_status asrinc_run_pipeline(const char *manifest_path,
                                             const asrinc_pipeline_options *options,
                                             asrinc_run **out);
ASRINC_API size_t asrinc_run_record_count(const asrinc_run *run);
ASRINC_API size_t asrinc_run_error_count(const asrinc_run *run);
/* Long-format per-utterance scores. */
ASRINC_API asrinc_status asrinc_run_scores_csv(const asrinc_run *run, char **out);
/* One row per utterance, one column per method and run. */
ASRINC_API asrinc_status asrinc_run_scores_wide_csv(const asrinc_run *run, char **out);
ASRINC_API asrinc_status asrinc_run_errors_csv(const asrinc_run *run, char **out);
ASRINC_API asrinc_status asrinc_run_report_text(const asrinc_run *run, char **out);
ASRINC_API void asrinc_run_free(asrinc_run *run);

/* Renders one combined report from the summary.json of each run directory. */
ASRINC_API asrinc_status asrinc_render_report(const char *const *run_dirs, size_t count,
                                              char **out);
/* Recomputes report.csv from scores.csv; *out_equal is 1 when identical. */
ASRINC_API asrinc_status asrinc_audit_replay(const char *run_dir, int *out_equal);

/* ---- Synthetic fixture ---- */

typedef struct asrinc_fixture_options {
  int32_t speakers;
  double noise_step;
  int32_t utterances_per_speaker;
  int32_t words_per_utterance;
  uint64_t seed;
  int32_t sample_rate_hz;
  int write_audio;
} asrinc_fixture_options;

ASRINC_API void asrinc_fixture_options_init(asrinc_fixture_options *options);
ASRINC_API asrinc_status asrinc_generate_fixture(const char *dir,
                                                 const asrinc_fixture_options *options);

#ifdef __cplusplus
}
#endif

#endif /* ASRINC_ASRINC_H_ */
