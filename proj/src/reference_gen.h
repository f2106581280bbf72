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

#ifndef ASRINC_REFERENCE_GEN_H_
#define ASRINC_REFERENCE_GEN_H_

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctc_decoder.h"
#include "error.h"
#include "ngram_lm.h"
#include "text.h"

namespace asrinc {

struct Language {
  enum class Kind { kDutch, kEnglish, kSpanish, kOther };
  Kind kind = Kind::kEnglish;
  std::string other_name;

  static Language dutch() { return {Kind::kDutch, {}}; }
  static Language english() { return {Kind::kEnglish, {}}; }
  static Language spanish() { return {Kind::kSpanish, {}}; }
  static Language other(std::string name) { return {Kind::kOther, std::move(name)}; }

  // Case-insensitive for the three named languages; any other non-empty
  // name becomes kOther. Throws UnknownLanguage on an empty name.
  static Language parse(std::string_view name);

  std::string display_name() const;
};

// The correction prompt with the language and sentence substituted.
std::string build_prompt(const Language &language, std::string_view sentence);

// The prompt template; build_prompt fills in kLanguageSlot and kSentenceSlot.
extern const std::string_view kPromptTemplate;
inline constexpr std::string_view kLanguageSlot = "[Dutch/English/Spanish]";
inline constexpr std::string_view kSentenceSlot = "[Sentence]";

enum class Extraction { kBracketed, kFallbackWholeReply };

std::string_view extraction_name(Extraction e);

// Contents of the first balanced [...] span, or the whole trimmed reply.
// Throws EmptyReply.
std::pair<std::string, Extraction> extract_bracketed(std::string_view reply);

struct CorrectionRequest {
  Language language;
  std::string sentence;
  std::string model_name;
  double temperature = 0.0;
  int32_t run_index = 0;
  std::string prompt;
};

struct CorrectionResult {
  Transcript corrected;
  std::string raw_reply;
  int32_t run_index = 0;
  Extraction extraction = Extraction::kBracketed;
  int32_t retries = 0;
};

// A chat-completion backend. complete() returns the raw assistant reply or
// throws TransportError, AuthError or RateLimited. Implementations must be
// safe to call from several threads at once.
class Corrector {
 public:
  virtual ~Corrector() = default;
  virtual std::string complete(const CorrectionRequest &request) = 0;
};

// Offline stand-in. Replies come from (sentence, run) entries, then
// sentence entries, and otherwise echo the sentence inside brackets.
class MockCorrector : public Corrector {
 public:
  MockCorrector() = default;
  explicit MockCorrector(std::map<std::string, std::string> replies)
      : replies_(std::move(replies)) {}

  void set_reply(std::string sentence, std::string reply) {
    replies_[std::move(sentence)] = std::move(reply);
  }
  void set_run_reply(std::string sentence, int32_t run, std::string reply) {
    run_replies_[{std::move(sentence), run}] = std::move(reply);
  }
  // The next n calls throw TransportError before a reply is produced.
  void fail_next(int n, ErrorCode code = ErrorCode::kTransportError);
  int calls() const;

  std::string complete(const CorrectionRequest &request) override;

  // JSON object {"sentence": "reply", ...}; an optional "runs" member maps
  // sentence -> [reply per run].
  static std::unique_ptr<MockCorrector> from_json(std::string_view json_text);
  static std::unique_ptr<MockCorrector> load(const std::filesystem::path &path);

 private:
  std::map<std::string, std::string> replies_;
  std::map<std::pair<std::string, int32_t>, std::string> run_replies_;
  mutable std::mutex mu_;
  int pending_failures_ = 0;
  ErrorCode failure_code_ = ErrorCode::kTransportError;
  int calls_ = 0;
};

struct HttpCorrectorConfig {
  std::string endpoint_url;  // e.g. https://host/v1/chat/completions
  std::string api_key;
  std::chrono::seconds timeout{60};
};

// Reads LLM_ENDPOINT_URL, LLM_API_KEY, LLM_MODEL_NAME. Throws
// MissingConfiguration when the endpoint or key is unset.
HttpCorrectorConfig http_config_from_env(std::string *model_name = nullptr);

// Chat-completion client: POST {model, temperature, messages:[{user}]},
// reply taken from choices[0].message.content.
class HttpCorrector : public Corrector {
 public:
  explicit HttpCorrector(HttpCorrectorConfig config);
  std::string complete(const CorrectionRequest &request) override;

 private:
  HttpCorrectorConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_delay{500};
  double multiplier = 2.0;
  // Replaced in tests to avoid real sleeps.
  std::function<void(std::chrono::milliseconds)> sleep;
};

// One request per run, runs independent of each other. Transport and
// rate-limit failures are retried with exponential backoff; the last error
// surfaces after max_retries. Throws EmptySentence for an empty input.
std::vector<CorrectionResult> correct_with_llm(Corrector &client, const Transcript &w_greedy,
                                               const Language &language, int32_t runs,
                                               double temperature,
                                               const std::string &model_name = "mock",
                                               const RetryPolicy &retry = {});

// A single request, used by the harness to schedule runs independently.
CorrectionResult correct_once(Corrector &client, const Transcript &w_greedy,
                              const Language &language, int32_t run_index, double temperature,
                              const std::string &model_name, const RetryPolicy &retry = {});

enum class ReferenceMethod { kNgram, kLlm };

// Throws UnknownMethod.
ReferenceMethod parse_reference_method(std::string_view name);

struct NgramReferenceInputs {
  const PosteriorMatrix *posteriors = nullptr;
  const Vocabulary *vocab = nullptr;
  const NGramModel *lm = nullptr;
  DecoderConfig config;
};

struct LlmReferenceInputs {
  Corrector *client = nullptr;
  const Transcript *w_greedy = nullptr;
  Language language;
  int32_t runs = 3;
  double temperature = 0.0;
  std::string model_name = "mock";
  RetryPolicy retry;
};

// ngram: one W_improved; llm: one W_LLM per run.
std::vector<Transcript> generate_reference(ReferenceMethod method,
                                           const NgramReferenceInputs &ngram,
                                           const LlmReferenceInputs &llm);

}  // namespace asrinc

#endif  // ASRINC_REFERENCE_GEN_H_
