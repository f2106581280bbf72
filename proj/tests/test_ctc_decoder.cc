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

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ctc_decoder.h"
#include "ngram_lm.h"
#include "oracles.h"
#include "test_util.h"

namespace asrinc {
namespace {

using Words = std::vector<std::string>;

constexpr double kOff = 1e-12;

// Row-major log-posteriors from per-frame probability rows.
PosteriorMatrix matrix_from_probs(const std::vector<std::vector<double>> &rows) {
  std::vector<double> data;
  for (const auto &r : rows) {
    for (double p : r) data.push_back(std::log(p));
  }
  return PosteriorMatrix("m", static_cast<int32_t>(rows.size()),
                         static_cast<int32_t>(rows.front().size()), std::move(data));
}

std::vector<double> one_hot(int V, int k) {
  std::vector<double> row(static_cast<size_t>(V), kOff);
  row[static_cast<size_t>(k)] = 1.0 - (V - 1) * kOff;
  return row;
}

const Vocabulary &abc_vocab() {
  static const Vocabulary v({"<blank>", "|", "a", "b"});
  return v;
}

// ---- greedy_decode ----

TEST(GreedyDecode, OneHotRows) {
  const auto m = matrix_from_probs({one_hot(4, 0), one_hot(4, 2), one_hot(4, 2), one_hot(4, 3)});
  EXPECT_EQ(greedy_decode(m).labels, (std::vector<int32_t>{0, 2, 2, 3}));
}

TEST(GreedyDecode, SingleBlankFrame) {
  const auto m = matrix_from_probs({{0.7, 0.1, 0.1, 0.1}});
  EXPECT_EQ(greedy_decode(m).labels, (std::vector<int32_t>{0}));
  EXPECT_TRUE(collapse(greedy_decode(m), abc_vocab()).empty());
}

TEST(GreedyDecode, TiesGoToLowestIndex) {
  const auto m = matrix_from_probs({{0.1, 0.4, 0.4, 0.1}, {0.25, 0.25, 0.25, 0.25}});
  EXPECT_EQ(greedy_decode(m).labels, (std::vector<int32_t>{1, 0}));
}

TEST(GreedyDecode, MatchesLinearScanOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int T = 1 + static_cast<int>(rng() % 8), V = 2 + static_cast<int>(rng() % 6);
    const auto lp = oracle::random_log_posteriors(rng, T, V);
    const PosteriorMatrix m("r", T, V, lp);
    const auto expected = oracle::argmax_scan(lp, T, V);
    EXPECT_EQ(greedy_decode(m).labels, std::vector<int32_t>(expected.begin(), expected.end()));
  }
}

TEST(GreedyDecode, ArgmaxInvariantToRowShiftWithoutValidation) {
  std::mt19937_64 rng(12);
  PosteriorValidation off;
  off.check_normalization = false;
  for (int trial = 0; trial < 50; ++trial) {
    const int T = 5, V = 4;
    auto lp = oracle::random_log_posteriors(rng, T, V);
    const auto base = greedy_decode(PosteriorMatrix("r", T, V, lp)).labels;
    const int row = static_cast<int>(rng() % T);
    for (int k = 0; k < V; ++k) lp[static_cast<size_t>(row * V + k)] -= 3.25;
    EXPECT_EQ(greedy_decode(PosteriorMatrix("r", T, V, lp, off)).labels, base);
    EXPECT_ASRINC_ERROR(PosteriorMatrix("r", T, V, lp), ErrorCode::kRowNotNormalized);
  }
}

// ---- collapse ----

TEST(Collapse, MergeThenDropBlanks) {
  const auto &v = abc_vocab();
  // [a, a, blank, a, b] -> units a a b, one word.
  EXPECT_EQ(collapse_labels({2, 2, 0, 2, 3}, 0), (std::vector<int32_t>{2, 2, 3}));
  EXPECT_EQ(collapse({{2, 2, 0, 2, 3}}, v).words, (Words{"aab"}));
  EXPECT_TRUE(collapse({{0, 0, 0}}, v).empty());
  EXPECT_EQ(collapse({{2, 0, 0, 2}}, v).words, (Words{"aa"}));
}

TEST(Collapse, SplitsAtDelimiter) {
  const auto &v = abc_vocab();
  EXPECT_EQ(collapse({{1, 2, 1, 1, 0, 3, 3, 1}}, v).words, (Words{"a", "b"}));
  EXPECT_EQ(collapse({{2, 1, 0, 1, 3}}, v).words, (Words{"a", "b"}));
  EXPECT_EQ(collapse({{2}}, v).source, TranscriptSource::kGreedy);
  EXPECT_ASRINC_ERROR(collapse({{7}}, v), ErrorCode::kInvalidArgument);
}

TEST(Collapse, ExhaustiveAgainstDefinition) {
  // Every path of length <= 6 over 3 symbols (blank = 0).
  for (int len = 0; len <= 6; ++len) {
    int total = 1;
    for (int i = 0; i < len; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      std::vector<int> path;
      for (int i = 0, c = code; i < len; ++i, c /= 3) path.push_back(c % 3);
      const auto expected = oracle::ctc_collapse(path, 0);
      const auto got = collapse_labels(std::vector<int32_t>(path.begin(), path.end()), 0);
      ASSERT_EQ(got, std::vector<int32_t>(expected.begin(), expected.end()));
      // Idempotent on blank-free, merge-free sequences.
      if (std::adjacent_find(got.begin(), got.end()) == got.end()) {
        EXPECT_EQ(collapse_labels(got, 0), got);
      }
    }
  }
}

// ---- fused_score ----

TEST(FusedScore, Arithmetic) {
  DecoderConfig cfg;
  EXPECT_DOUBLE_EQ(fused_score(-2.0, -3.0, 2, cfg), -2.5);
  cfg.alpha = cfg.beta = 0.0;
  EXPECT_DOUBLE_EQ(fused_score(-7.25, -3.0, 4, cfg), -7.25);
  cfg.alpha = cfg.beta = 1.0;
  EXPECT_DOUBLE_EQ(fused_score(-1.0, -1.0, 1, cfg), -1.0);
  EXPECT_EQ(fused_score(-oracle::kNegInf * -1.0, 0, 0, cfg), oracle::kNegInf);
}

// ---- beam search vs the exhaustive oracle ----

void check_against_oracle(const std::vector<double> &lp, int T, const Vocabulary &vocab) {
  const int V = vocab.size();
  const PosteriorMatrix m("r", T, V, lp);
  DecoderConfig cfg;
  cfg.alpha = cfg.beta = 0.0;
  cfg.beam_width = 100000;
  const auto hyps = beam_search(m, vocab, nullptr, cfg);
  const auto sums = oracle::ctc_alignment_sums(lp, T, V, vocab.blank_index());

  double best = oracle::kNegInf;
  for (const auto &[k, v] : sums) best = std::max(best, v);
  ASSERT_FALSE(hyps.empty());
  const std::vector<int> top(hyps.front().prefix.begin(), hyps.front().prefix.end());
  ASSERT_TRUE(sums.count(top));
  EXPECT_NEAR(sums.at(top), best, 1e-9);
  EXPECT_NEAR(hyps.front().fused_score, best, 1e-9);
  // Every surviving prefix carries its exact alignment-summed mass.
  for (const auto &h : hyps) {
    const std::vector<int> key(h.prefix.begin(), h.prefix.end());
    ASSERT_TRUE(sums.count(key));
    EXPECT_NEAR(h.acoustic_logp(), sums.at(key), 1e-9);
  }
  // Nothing with non-negligible mass is missing.
  EXPECT_EQ(hyps.size(), sums.size());
}

TEST(BeamSearch, MatchesExhaustiveOracleOnRandomMatrices) {
  std::mt19937_64 rng(13);
  const std::vector<Vocabulary> vocabs = {Vocabulary({"<blank>", "|"}),
                                          Vocabulary({"<blank>", "|", "a"}),
                                          Vocabulary({"<blank>", "|", "a", "b"}),
                                          Vocabulary({"a", "<blank>", "b", "|"})};
  for (int trial = 0; trial < 300; ++trial) {
    const auto &vocab = vocabs[rng() % vocabs.size()];
    const int T = 1 + static_cast<int>(rng() % 4);
    check_against_oracle(oracle::random_log_posteriors(rng, T, vocab.size()), T, vocab);
  }
}

TEST(BeamSearch, MatchesOracleOnUniformRows) {
  for (int T = 1; T <= 4; ++T) {
    const auto &vocab = abc_vocab();
    std::vector<double> lp(static_cast<size_t>(T * 4), std::log(0.25));
    check_against_oracle(lp, T, vocab);
  }
}

TEST(BeamSearch, OneHotEqualsGreedyCollapse) {
  const Vocabulary v({"<blank>", "|", "a", "b", "c"});
  const NGramModel lm = parse_arpa(
      "\\data\\\nngram 1=3\n\n\\1-grams:\n-0.5\tab\n-1.0\tc\n-2.0\tba\n\n\\end\\\n");
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> rows;
    const int T = 1 + static_cast<int>(rng() % 10);
    for (int t = 0; t < T; ++t) rows.push_back(one_hot(5, static_cast<int>(rng() % 5)));
    const auto m = matrix_from_probs(rows);
    DecoderConfig cfg;
    cfg.alpha = 0.0;
    const Transcript g = collapse(greedy_decode(m), v);
    const Transcript b = beam_search_decode(m, v, &lm, cfg);
    EXPECT_EQ(b.words, g.words);
    EXPECT_EQ(b.source, TranscriptSource::kNgramReference);
  }
}

// ---- shallow fusion ----

struct FlipInstance {
  Vocabulary vocab{{"<blank>", "|", "b", "e", "u", "l", "k"}};
  PosteriorMatrix post = build();
  NGramModel lm = parse_arpa(
      "\\data\\\nngram 1=2\n\n\\1-grams:\n-2.5\tbeul\n-0.2\tbeuk\n\n\\end\\\n");

  static PosteriorMatrix build() {
    std::vector<double> amb(7, kOff);
    amb[5] = 0.6;
    amb[6] = 1.0 - 0.6 - 5 * kOff;
    return matrix_from_probs({one_hot(7, 2), one_hot(7, 3), one_hot(7, 4), amb, one_hot(7, 0)});
  }

  double threshold() const {
    const auto lp = post.data();
    const double ac_beul = oracle::ctc_forward(lp, 5, 7, 0, {2, 3, 4, 5});
    const double ac_beuk = oracle::ctc_forward(lp, 5, 7, 0, {2, 3, 4, 6});
    const Words beul{"beul"}, beuk{"beuk"};
    return (ac_beul - ac_beuk) / (lm.sequence_logprob(beuk) - lm.sequence_logprob(beul));
  }
};

TEST(BeamSearch, FusionFlipsAtAnalyticThreshold) {
  const FlipInstance inst;
  const double alpha_star = inst.threshold();
  ASSERT_GT(alpha_star, 0.0);
  for (int i = 0; i <= 100; ++i) {
    DecoderConfig cfg;
    cfg.alpha = 0.01 * i;
    const auto words = beam_search_decode(inst.post, inst.vocab, &inst.lm, cfg).words;
    ASSERT_EQ(words.size(), 1u);
    if (cfg.alpha < alpha_star - 0.01) EXPECT_EQ(words[0], "beul") << cfg.alpha;
    if (cfg.alpha > alpha_star + 0.01) EXPECT_EQ(words[0], "beuk") << cfg.alpha;
  }
}

TEST(BeamSearch, AgreeingLmNeverChangesOutput) {
  FlipInstance inst;
  inst.lm = parse_arpa("\\data\\\nngram 1=2\n\n\\1-grams:\n-0.2\tbeul\n-2.5\tbeuk\n\n\\end\\\n");
  for (int i = 0; i <= 40; ++i) {
    DecoderConfig cfg;
    cfg.alpha = 0.25 * i;
    EXPECT_EQ(beam_search_decode(inst.post, inst.vocab, &inst.lm, cfg).words, (Words{"beul"}));
  }
}

TEST(BeamSearch, LmAppliedAtWordBoundaries) {
  // Two words; the first is ambiguous between "ab" and "ac". The LM only
  // knows the bigram "ac b", so the first word flips under fusion.
  const Vocabulary v({"<blank>", "|", "a", "b", "c"});
  std::vector<double> amb(5, kOff);
  amb[3] = 0.55;
  amb[4] = 1.0 - 0.55 - 3 * kOff;
  const auto m = matrix_from_probs(
      {one_hot(5, 2), amb, one_hot(5, 1), one_hot(5, 3), one_hot(5, 0)});
  const NGramModel lm = parse_arpa(
      "\\data\\\nngram 1=5\nngram 2=2\n\n\\1-grams:\n-99\t<s>\t-0.3\n-1.0\t</s>\n-1.0\tab\t-0.3\n"
      "-1.0\tac\t-0.3\n-1.0\tb\t-0.3\n\n\\2-grams:\n-0.01\tac b\n-0.01\t<s> ac\n\n\\end\\\n");
  DecoderConfig cfg;
  cfg.alpha = 0.0;
  EXPECT_EQ(beam_search_decode(m, v, &lm, cfg).words, (Words{"ab", "b"}));
  cfg.alpha = 1.0;
  const auto hyps = beam_search(m, v, &lm, cfg);
  EXPECT_EQ(labels_to_words(hyps.front().prefix, v), (Words{"ac", "b"}));
  EXPECT_EQ(hyps.front().word_count, 2);
  const Words w{"ac", "b"};
  EXPECT_NEAR(hyps.front().lm_logp, lm.sequence_logprob(w), 1e-12);
  EXPECT_NEAR(hyps.front().fused_score,
              hyps.front().acoustic_logp() + lm.sequence_logprob(w) + 0.5 * 2, 1e-12);
}

TEST(BeamSearch, WordBonusCountsWords) {
  // "a|a" vs "aa": beta rewards the two-word reading.
  const Vocabulary v({"<blank>", "|", "a"});
  std::vector<double> amb = {0.45, 0.35, 0.2};
  const auto m = matrix_from_probs({one_hot(3, 2), amb, one_hot(3, 2)});
  DecoderConfig cfg;
  cfg.alpha = 0.0;
  cfg.beta = 0.0;
  const auto plain = beam_search_decode(m, v, nullptr, cfg).words;
  cfg.beta = 5.0;
  EXPECT_EQ(beam_search_decode(m, v, nullptr, cfg).words, (Words{"a", "a"}));
  EXPECT_EQ(plain, (Words{"aa"}));
}

TEST(BeamSearch, DeterministicAndNarrowBeam) {
  std::mt19937_64 rng(15);
  const auto &v = abc_vocab();
  const auto lp = oracle::random_log_posteriors(rng, 12, 4);
  const PosteriorMatrix m("r", 12, 4, lp);
  DecoderConfig cfg;
  const auto a = beam_search(m, v, nullptr, cfg);
  const auto b = beam_search(m, v, nullptr, cfg);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].prefix, b[i].prefix);
    EXPECT_EQ(a[i].fused_score, b[i].fused_score);
  }
  for (size_t i = 1; i < a.size(); ++i) EXPECT_GE(a[i - 1].fused_score, a[i].fused_score);
  cfg.beam_width = 1;
  EXPECT_EQ(beam_search(m, v, nullptr, cfg).size(), 1u);
}

TEST(BeamSearch, RejectsBadConfig) {
  const auto m = matrix_from_probs({one_hot(4, 2)});
  DecoderConfig cfg;
  cfg.beam_width = 0;
  EXPECT_ASRINC_ERROR(beam_search(m, abc_vocab(), nullptr, cfg), ErrorCode::kInvalidArgument);
  const Vocabulary v5({"<blank>", "|", "a", "b", "c"});
  EXPECT_ASRINC_ERROR(beam_search(m, v5, nullptr, DecoderConfig{}), ErrorCode::kDimensionMismatch);
}

}  // namespace
}  // namespace asrinc
