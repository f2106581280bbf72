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

#include "synth.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "error.h"
#include "ngram_lm.h"
#include "posteriors.h"
#include "text.h"
#include "vocabulary.h"
#include "wav.h"

namespace asrinc {

namespace {

constexpr double kOffProbability = 1e-12;
constexpr double kWrongProbability = 0.6;

const std::vector<std::string> &word_bank() {
  static const std::vector<std::string> bank = {
      "the",   "house", "water", "green", "little", "garden", "bread", "table", "window", "morning",
      "river", "stone", "light", "chair", "paper",  "music",  "dog",   "cat",   "apple",  "yellow",
      "happy", "open",  "close", "walk",  "talk",   "read",   "write", "small", "large",  "night",
      "summer", "winter", "friend", "school", "market", "doctor", "bottle", "flower", "street", "kitchen"};
  return bank;
}

std::string fmt_id(const char *pattern, int32_t a, int32_t b = 0) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

void write_text(const std::filesystem::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << content;
}

std::string corrupt_word(const std::string &word, SynthRng &rng, const std::set<std::string> &bank,
                         size_t *position, char *wrong) {
  for (;;) {
    const size_t pos = rng.below(word.size());
    const char c = static_cast<char>('a' + rng.below(26));
    if (c == word[pos]) continue;
    std::string out = word;
    out[pos] = c;
    if (bank.count(out)) continue;
    *position = pos;
    *wrong = c;
    return out;
  }
}

NGramModel train_bigram(const std::vector<std::vector<std::string>> &sentences) {
  const double lambda = 0.5;
  const std::string bos(kSentenceStart), eos(kSentenceEnd);
  std::map<std::string, double> uni;
  std::map<std::string, std::map<std::string, double>> bi;
  std::map<std::string, double> history;
  double total = 0.0;
  for (const auto &s : sentences) {
    std::string prev = bos;
    for (size_t i = 0; i <= s.size(); ++i) {
      const std::string &w = i < s.size() ? s[i] : eos;
      uni[w] += 1.0;
      total += 1.0;
      bi[prev][w] += 1.0;
      history[prev] += 1.0;
      prev = w;
    }
  }
  std::vector<std::string> events = word_bank();
  events.push_back(eos);
  std::map<std::string, double> p_uni;
  for (const auto &w : events) p_uni[w] = (uni[w] + 1.0) / (total + static_cast<double>(events.size()));

  std::map<std::string, double> backoff;
  std::vector<std::pair<std::string, NGramEntry>> bigrams;
  for (const auto &[v, nexts] : bi) {
    double seen_p = 0.0, seen_uni = 0.0;
    for (const auto &[w, c] : nexts) {
      const double p = lambda * c / history[v] + (1.0 - lambda) * p_uni[w];
      seen_p += p;
      seen_uni += p_uni[w];
      bigrams.push_back({v + " " + w, {std::log10(p), std::nullopt}});
    }
    backoff[v] = std::log10((1.0 - seen_p) / (1.0 - seen_uni));
  }
  std::vector<std::pair<std::string, NGramEntry>> unigrams;
  unigrams.push_back({bos, {-99.0, backoff.count(bos) ? std::optional<double>(backoff[bos]) : 0.0}});
  for (const auto &w : events) {
    std::optional<double> bo;
    if (w != eos) bo = backoff.count(w) ? backoff[w] : 0.0;
    unigrams.push_back({w, {std::log10(p_uni[w]), bo}});
  }
  return NGramModel(2, {std::move(unigrams), std::move(bigrams)});
}

}  // namespace

double SynthRng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double SynthRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform(), u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double SynthRng::gamma(double shape) {
  if (shape <= 0.0) fail(ErrorCode::kInvalidArgument, "gamma shape must be positive");
  if (shape < 1.0) return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
  // Marsaglia-Tsang.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

uint64_t SynthRng::below(uint64_t n) {
  if (n == 0) fail(ErrorCode::kInvalidArgument, "empty range");
  return engine_() % n;
}

std::vector<double> gaussian_noise(size_t n, SynthRng &rng) {
  std::vector<double> out(n);
  for (auto &x : out) x = rng.normal();
  return out;
}

std::vector<double> gamma_speech_mixture(size_t n, double snr_db, SynthRng &rng) {
  std::vector<double> speech(n);
  for (auto &x : speech) {
    const double g = rng.gamma(0.4);
    x = rng.uniform() < 0.5 ? -g : g;
  }
  std::vector<double> noise = gaussian_noise(n, rng);
  auto power = [](const std::vector<double> &v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc / static_cast<double>(v.size());
  };
  const double speech_scale = 1.0 / std::sqrt(power(speech));
  const double noise_scale = std::pow(10.0, -snr_db / 20.0) / std::sqrt(power(noise));
  for (size_t i = 0; i < n; ++i) speech[i] = speech[i] * speech_scale + noise[i] * noise_scale;
  return speech;
}

SynthCorpus generate_fixture(const std::filesystem::path &dir, const SynthConfig &config) {
  if (config.speakers < 1 || config.utterances_per_speaker < 1 || config.words_per_utterance < 1) {
    fail(ErrorCode::kInvalidArgument, "fixture sizes must be positive");
  }
  if (config.noise_step < 0.0 || config.noise_step * (config.speakers - 1) > 1.0) {
    fail(ErrorCode::kInvalidArgument, "noise rates must lie in [0, 1]");
  }
  std::filesystem::create_directories(dir / "posteriors");
  if (config.write_audio) std::filesystem::create_directories(dir / "audio");

  std::vector<std::string> symbols = {std::string(kBlankSymbol), std::string(kDelimiterSymbol)};
  for (char c = 'a'; c <= 'z'; ++c) symbols.push_back(std::string(1, c));
  const Vocabulary vocab(symbols);
  std::string vocab_text;
  for (const auto &s : symbols) vocab_text += s + "\n";
  write_text(dir / "vocab.txt", vocab_text);

  const auto &bank = word_bank();
  const std::set<std::string> bank_set(bank.begin(), bank.end());
  SynthRng rng(config.seed);
  SynthCorpus corpus;
  std::vector<std::vector<std::string>> sentences;
  int64_t corrupted_seen = 0;

  const int32_t words_per_speaker = config.utterances_per_speaker * config.words_per_utterance;
  for (int32_t s = 0; s < config.speakers; ++s) {
    SynthSpeaker spk;
    spk.speaker_id = fmt_id("spk%02d", s);
    spk.noise_rate = config.noise_step * s;
    spk.rating = 5.0 * (1.0 - spk.noise_rate);
    spk.total_words = words_per_speaker;
    spk.corrupted_words =
        static_cast<int32_t>(std::llround(spk.noise_rate * static_cast<double>(words_per_speaker)));

    std::vector<int32_t> order(static_cast<size_t>(words_per_speaker));
    for (int32_t i = 0; i < words_per_speaker; ++i) order[static_cast<size_t>(i)] = i;
    for (int32_t i = 0; i < spk.corrupted_words; ++i) {
      const auto j = static_cast<size_t>(i) + rng.below(static_cast<uint64_t>(words_per_speaker - i));
      std::swap(order[static_cast<size_t>(i)], order[j]);
    }
    std::set<int32_t> corrupt(order.begin(), order.begin() + spk.corrupted_words);

    for (int32_t u = 0; u < config.utterances_per_speaker; ++u) {
      SynthUtterance utt;
      const std::string id = fmt_id("spk%02d_utt%02d", s, u);
      for (int32_t w = 0; w < config.words_per_utterance; ++w) {
        utt.truth.push_back(bank[rng.below(bank.size())]);
      }
      sentences.push_back(utt.truth);

      // Log-posterior frames: one per token followed by one blank; a delimiter
      // token between words.
      const auto V = static_cast<size_t>(vocab.size());
      std::vector<double> data;
      auto push_frame = [&](int32_t best, int32_t second) {
        std::vector<double> row(V, kOffProbability);
        if (second < 0) {
          row[static_cast<size_t>(best)] = 1.0 - static_cast<double>(V - 1) * kOffProbability;
        } else {
          row[static_cast<size_t>(best)] = kWrongProbability;
          row[static_cast<size_t>(second)] =
              1.0 - kWrongProbability - static_cast<double>(V - 2) * kOffProbability;
        }
        for (double p : row) data.push_back(std::log(p));
      };
      for (int32_t w = 0; w < config.words_per_utterance; ++w) {
        const std::string &word = utt.truth[static_cast<size_t>(w)];
        std::string heard = word;
        size_t pos = word.size();
        char wrong = 0;
        if (corrupt.count(u * config.words_per_utterance + w)) {
          heard = corrupt_word(word, rng, bank_set, &pos, &wrong);
          ++utt.corrupted;
          utt.half_fixed.push_back(corrupted_seen % 2 == 0 ? word : heard);
          ++corrupted_seen;
        } else {
          utt.half_fixed.push_back(word);
        }
        utt.greedy.push_back(heard);
        if (w > 0) {
          push_frame(vocab.delimiter_index(), -1);
          push_frame(vocab.blank_index(), -1);
        }
        for (size_t i = 0; i < word.size(); ++i) {
          const int32_t right = vocab.index_of(std::string(1, word[i]));
          if (i == pos) {
            push_frame(vocab.index_of(std::string(1, wrong)), right);
          } else {
            push_frame(right, -1);
          }
          push_frame(vocab.blank_index(), -1);
        }
      }
      const auto frames = static_cast<int32_t>(data.size() / V);
      const PosteriorMatrix post(id, frames, vocab.size(), std::move(data));
      write_posteriors(dir / "posteriors" / (id + ".ctcp"), post, true);

      UtteranceRecord &rec = utt.record;
      rec.utterance_id = id;
      rec.speaker_id = spk.speaker_id;
      rec.posterior_path = "posteriors/" + id + ".ctcp";
      rec.ground_truth_text = join_words(utt.truth);
      rec.rating = spk.rating;
      const double seconds = 0.4 * config.words_per_utterance * (1.0 + 2.0 * spk.noise_rate);
      const auto n = static_cast<size_t>(std::llround(seconds * config.sample_rate_hz));
      rec.duration_s = static_cast<double>(n) / config.sample_rate_hz;
      if (config.write_audio) {
        std::vector<double> samples = gamma_speech_mixture(n, 20.0 - 20.0 * spk.noise_rate, rng);
        double peak = 0.0;
        for (double x : samples) peak = std::max(peak, std::fabs(x));
        for (double &x : samples) x *= 0.9 / peak;
        rec.audio_path = "audio/" + id + ".wav";
        write_wav(dir / *rec.audio_path, AudioBuffer{std::move(samples), config.sample_rate_hz});
      }
      corpus.utterances.push_back(std::move(utt));
    }
    corpus.speakers.push_back(spk);
  }

  std::vector<UtteranceRecord> records;
  nlohmann::ordered_json fix_all = nlohmann::ordered_json::object();
  nlohmann::ordered_json half_fix = nlohmann::ordered_json::object();
  for (const auto &u : corpus.utterances) {
    records.push_back(u.record);
    const std::string key = join_words(u.greedy);
    if (!fix_all.contains(key)) fix_all[key] = "[" + join_words(u.truth) + "]";
    if (!half_fix.contains(key)) half_fix[key] = "[" + join_words(u.half_fixed) + "]";
  }
  write_text(dir / "manifest.jsonl", serialize_manifest(records));
  write_text(dir / "lm.arpa", serialize_arpa(train_bigram(sentences)));
  write_text(dir / "mock_fix_all.json", fix_all.dump(2) + "\n");
  write_text(dir / "mock_half_fix.json", half_fix.dump(2) + "\n");
  return corpus;
}

}  // namespace asrinc
