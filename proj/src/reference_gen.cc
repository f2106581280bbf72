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

#include "reference_gen.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "error.h"

namespace asrinc {

const std::string_view kPromptTemplate =
    "The following is the output of an automatic speech recognition system for an utterance "
    "of a speaker with speech pathology in [Dutch/English/Spanish]: [Sentence]\n"
    "\n"
    "Please correct the sentence. Please put the corrected sentence within square brackets "
    "[like this]. If the sentence is already correct, repeat the sentence within square "
    "brackets.";

Language Language::parse(std::string_view name) {
  const std::string t = trim(name);
  if (t.empty()) fail(ErrorCode::kUnknownLanguage, "language name is empty");
  const std::string lower = to_lower_utf8(t);
  if (lower == "dutch" || lower == "nl") return dutch();
  if (lower == "english" || lower == "en") return english();
  if (lower == "spanish" || lower == "es") return spanish();
  return other(t);
}

std::string Language::display_name() const {
  switch (kind) {
    case Kind::kDutch: return "Dutch";
    case Kind::kEnglish: return "English";
    case Kind::kSpanish: return "Spanish";
    case Kind::kOther: return other_name;
  }
  return other_name;
}

std::string build_prompt(const Language &language, std::string_view sentence) {
  const std::string name = language.display_name();
  if (name.empty()) fail(ErrorCode::kUnknownLanguage, "language has no display name");
  const size_t lang_at = kPromptTemplate.find(kLanguageSlot);
  const size_t sent_at = kPromptTemplate.find(kSentenceSlot);
  std::string out;
  out.reserve(kPromptTemplate.size() + sentence.size() + name.size());
  out += kPromptTemplate.substr(0, lang_at);
  out += name;
  out += kPromptTemplate.substr(lang_at + kLanguageSlot.size(),
                                sent_at - lang_at - kLanguageSlot.size());
  out += sentence;
  out += kPromptTemplate.substr(sent_at + kSentenceSlot.size());
  return out;
}

std::string_view extraction_name(Extraction e) {
  return e == Extraction::kBracketed ? "bracketed" : "fallback_whole_reply";
}

std::pair<std::string, Extraction> extract_bracketed(std::string_view reply) {
  const std::string whole = trim(reply);
  if (whole.empty()) fail(ErrorCode::kEmptyReply, "LLM reply is empty");
  for (size_t open = reply.find('['); open != std::string_view::npos;
       open = reply.find('[', open + 1)) {
    int depth = 0;
    for (size_t i = open; i < reply.size(); ++i) {
      if (reply[i] == '[') ++depth;
      if (reply[i] == ']' && --depth == 0) {
        return {trim(reply.substr(open + 1, i - open - 1)), Extraction::kBracketed};
      }
    }
  }
  return {whole, Extraction::kFallbackWholeReply};
}

void MockCorrector::fail_next(int n, ErrorCode code) {
  std::lock_guard<std::mutex> lock(mu_);
  pending_failures_ = n;
  failure_code_ = code;
}

int MockCorrector::calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return calls_;
}

std::string MockCorrector::complete(const CorrectionRequest &request) {
  std::lock_guard<std::mutex> lock(mu_);
  ++calls_;
  if (pending_failures_ > 0) {
    --pending_failures_;
    fail(failure_code_, "mock failure");
  }
  if (auto it = run_replies_.find({request.sentence, request.run_index}); it != run_replies_.end()) {
    return it->second;
  }
  if (auto it = replies_.find(request.sentence); it != replies_.end()) return it->second;
  return "[" + request.sentence + "]";
}

std::unique_ptr<MockCorrector> MockCorrector::from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    fail(ErrorCode::kInvalidArgument, std::string("mock table is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::kInvalidArgument, "mock table must be a JSON object");
  auto mock = std::make_unique<MockCorrector>();
  for (const auto &[key, value] : j.items()) {
    if (key == "runs") {
      if (!value.is_object()) fail(ErrorCode::kInvalidArgument, "mock 'runs' must be an object");
      for (const auto &[sentence, replies] : value.items()) {
        if (!replies.is_array()) fail(ErrorCode::kInvalidArgument, "mock run replies must be arrays");
        for (size_t r = 0; r < replies.size(); ++r) {
          mock->set_run_reply(sentence, static_cast<int32_t>(r), replies[r].get<std::string>());
        }
      }
    } else {
      if (!value.is_string()) fail(ErrorCode::kInvalidArgument, "mock replies must be strings");
      mock->set_reply(key, value.get<std::string>());
    }
  }
  return mock;
}

std::unique_ptr<MockCorrector> MockCorrector::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open mock table " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

CorrectionResult correct_once(Corrector &client, const Transcript &w_greedy,
                              const Language &language, int32_t run_index, double temperature,
                              const std::string &model_name, const RetryPolicy &retry) {
  const std::string sentence = trim(w_greedy.text());
  if (sentence.empty()) fail(ErrorCode::kEmptySentence, "greedy transcript is empty");
  if (temperature < 0.0) fail(ErrorCode::kInvalidArgument, "temperature must be >= 0");

  CorrectionRequest request;
  request.language = language;
  request.sentence = sentence;
  request.model_name = model_name;
  request.temperature = temperature;
  request.run_index = run_index;
  request.prompt = build_prompt(language, sentence);

  auto delay = retry.initial_delay;
  for (int attempt = 0;; ++attempt) {
    try {
      CorrectionResult result;
      result.raw_reply = client.complete(request);
      auto [text, extraction] = extract_bracketed(result.raw_reply);
      result.corrected = Transcript::from_text(std::move(text), TranscriptSource::kLlmReference);
      result.extraction = extraction;
      result.run_index = run_index;
      result.retries = attempt;
      return result;
    } catch (const Error &e) {
      const bool retryable =
          e.code() == ErrorCode::kTransportError || e.code() == ErrorCode::kRateLimited;
      if (!retryable || attempt >= retry.max_retries) throw;
    }
    if (retry.sleep) {
      retry.sleep(delay);
    } else {
      std::this_thread::sleep_for(delay);
    }
    delay = std::chrono::milliseconds(
        static_cast<long long>(static_cast<double>(delay.count()) * retry.multiplier));
  }
}

std::vector<CorrectionResult> correct_with_llm(Corrector &client, const Transcript &w_greedy,
                                               const Language &language, int32_t runs,
                                               double temperature, const std::string &model_name,
                                               const RetryPolicy &retry) {
  if (runs < 1) fail(ErrorCode::kInvalidArgument, "runs must be >= 1");
  std::vector<CorrectionResult> results;
  results.reserve(static_cast<size_t>(runs));
  for (int32_t r = 0; r < runs; ++r) {
    results.push_back(correct_once(client, w_greedy, language, r, temperature, model_name, retry));
  }
  return results;
}

ReferenceMethod parse_reference_method(std::string_view name) {
  if (name == "ngram") return ReferenceMethod::kNgram;
  if (name == "llm") return ReferenceMethod::kLlm;
  fail(ErrorCode::kUnknownMethod, "unknown reference method '" + std::string(name) + "'");
}

std::vector<Transcript> generate_reference(ReferenceMethod method,
                                           const NgramReferenceInputs &ngram,
                                           const LlmReferenceInputs &llm) {
  if (method == ReferenceMethod::kNgram) {
    if (!ngram.posteriors || !ngram.vocab) {
      fail(ErrorCode::kMissingConfiguration, "n-gram reference needs posteriors and a vocabulary");
    }
    return {beam_search_decode(*ngram.posteriors, *ngram.vocab, ngram.lm, ngram.config)};
  }
  if (!llm.client || !llm.w_greedy) {
    fail(ErrorCode::kMissingConfiguration, "LLM reference needs a client and a greedy transcript");
  }
  std::vector<Transcript> out;
  for (auto &r : correct_with_llm(*llm.client, *llm.w_greedy, llm.language, llm.runs,
                                  llm.temperature, llm.model_name, llm.retry)) {
    out.push_back(std::move(r.corrected));
  }
  return out;
}

}  // namespace asrinc
