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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "alignment.h"
#include "baselines.h"
#include "ctc_decoder.h"
#include "ngram_lm.h"
#include "oracles.h"
#include "stats.h"
#include "synth.h"
#include "text.h"

namespace {

using namespace asrinc;
namespace fs = std::filesystem;
using Words = std::vector<std::string>;
using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string &what) {
    if (!cond && ok) detail << what;
    ok = ok && cond;
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int run_cli(const std::string &args) {
  const std::string cmd = std::string(ASRINC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> read_csv(const fs::path &path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(oracle::read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(split_csv_line(line));
  }
  return rows;
}

PosteriorMatrix from_probs(const std::vector<std::vector<double>> &rows) {
  std::vector<double> data;
  for (const auto &r : rows) {
    for (double p : r) data.push_back(std::log(p));
  }
  return PosteriorMatrix("m", static_cast<int32_t>(rows.size()),
                         static_cast<int32_t>(rows.front().size()), std::move(data));
}

std::vector<double> one_hot(int V, int k, double off = 1e-12) {
  std::vector<double> row(static_cast<size_t>(V), off);
  row[static_cast<size_t>(k)] = 1.0 - (V - 1) * off;
  return row;
}

// 1. Beam search against exhaustive alignment sums.
void beam_oracle_equivalence(const std::vector<double> &lp, int T, const Vocabulary &vocab,
                             Check &c) {
  const int V = vocab.size();
  const PosteriorMatrix m("r", T, V, lp);
  DecoderConfig cfg;
  cfg.alpha = cfg.beta = 0.0;
  cfg.beam_width = 100000;
  cfg.prune_logp_floor = -std::numeric_limits<double>::infinity();
  const auto hyps = beam_search(m, vocab, nullptr, cfg);
  const auto sums = oracle::ctc_alignment_sums(lp, T, V, vocab.blank_index());
  double best = oracle::kNegInf, second = oracle::kNegInf;
  std::vector<int> best_key;
  for (const auto &[k, v] : sums) {
    if (v > best) {
      second = best;
      best = v;
      best_key = k;
    } else if (v > second) {
      second = v;
    }
  }
  const std::vector<int> top(hyps.front().prefix.begin(), hyps.front().prefix.end());
  c.expect(std::abs(hyps.front().fused_score - best) <= 1e-9, "best score differs from oracle");
  if (best - second > 1e-9) {
    const std::vector<int32_t> key(best_key.begin(), best_key.end());
    c.expect(labels_to_words(hyps.front().prefix, vocab) == labels_to_words(key, vocab) &&
                 top == best_key,
             "best prefix differs from oracle");
  } else {
    c.expect(sums.count(top) && std::abs(sums.at(top) - best) <= 1e-9, "tied prefix not maximal");
  }
}

bool criterion1(std::string &detail) {
  const auto start = Clock::now();
  Check c;
  const std::vector<Vocabulary> vocabs = {
      Vocabulary({"<blank>", "|"}), Vocabulary({"<blank>", "|", "a"}),
      Vocabulary({"<blank>", "|", "a", "b"}), Vocabulary({"a", "<blank>", "b", "|"}),
      Vocabulary({"<blank>", "|", "a", "b", "c"})};
  std::mt19937_64 rng(101);
  int instances = 0;
  for (int i = 0; i < 500; ++i) {
    const auto &vocab = vocabs[rng() % vocabs.size()];
    const int T = 1 + static_cast<int>(rng() % 4);
    beam_oracle_equivalence(oracle::random_log_posteriors(rng, T, vocab.size()), T, vocab, c);
    ++instances;
  }
  for (const auto &vocab : vocabs) {
    const int V = vocab.size();
    for (int T = 1; T <= 4; ++T) {
      // Uniform rows: maximal ties.
      beam_oracle_equivalence(std::vector<double>(static_cast<size_t>(T * V), -std::log(V)), T, vocab, c);
      // One-hot rows on every symbol, and a repeated symbol with a blank between.
      for (int k = 0; k < V; ++k) {
        std::vector<double> lp;
        for (int t = 0; t < T; ++t) {
          for (double p : one_hot(V, (k + (t % 2 ? vocab.blank_index() : 0)) % V, 1e-3)) lp.push_back(std::log(p));
        }
        beam_oracle_equivalence(lp, T, vocab, c);
        instances += 1;
      }
      ++instances;
    }
  }
  const double secs = seconds_since(start);
  c.expect(secs < 30.0, "runtime over 30 s");
  detail = std::to_string(instances) + " instances, " + std::to_string(secs).substr(0, 5) + " s" +
           (c.ok ? "" : "; " + c.detail.str());
  return c.ok;
}

// 2. Greedy decoding and collapse.
bool criterion2(std::string &detail) {
  const auto start = Clock::now();
  Check c;
  std::mt19937_64 rng(202);
  for (int i = 0; i < 1000; ++i) {
    const int T = 1 + static_cast<int>(rng() % 20), V = 2 + static_cast<int>(rng() % 10);
    const auto lp = oracle::random_log_posteriors(rng, T, V);
    const auto expected = oracle::argmax_scan(lp, T, V);
    const auto got = greedy_decode(PosteriorMatrix("r", T, V, lp)).labels;
    c.expect(std::vector<int>(got.begin(), got.end()) == expected, "greedy differs from argmax scan");
  }
  int paths = 0;
  for (int len = 0; len <= 6; ++len) {
    std::vector<int> path(static_cast<size_t>(len), 0);
    for (;;) {
      // Definition applied literally: merge runs first, then drop blanks.
      std::vector<int> merged, expected;
      for (int k : path) {
        if (merged.empty() || merged.back() != k) merged.push_back(k);
      }
      for (int k : merged) {
        if (k != 0) expected.push_back(k);
      }
      const auto got = collapse_labels(std::vector<int32_t>(path.begin(), path.end()), 0);
      c.expect(std::vector<int>(got.begin(), got.end()) == expected, "collapse differs");
      ++paths;
      int t = len - 1;
      while (t >= 0 && ++path[static_cast<size_t>(t)] == 3) path[static_cast<size_t>(t--)] = 0;
      if (t < 0) break;
    }
  }
  const double secs = seconds_since(start);
  c.expect(secs < 10.0, "runtime over 10 s");
  detail = "1000 matrices, " + std::to_string(paths) + " paths" + (c.ok ? "" : "; " + c.detail.str());
  return c.ok;
}

// 3. Fusion flip at the analytic threshold.
bool criterion3(std::string &detail) {
  Check c;
  const Vocabulary vocab({"<blank>", "|", "b", "e", "u", "l", "k"});
  std::vector<double> amb(7, 1e-12);
  amb[5] = 0.6;
  amb[6] = 1.0 - 0.6 - 5e-12;
  const PosteriorMatrix post = from_probs({one_hot(7, 2), one_hot(7, 3), one_hot(7, 4), amb, one_hot(7, 0)});
  const NGramModel lm =
      parse_arpa("\\data\\\nngram 1=2\n\n\\1-grams:\n-2.5\tbeul\n-0.2\tbeuk\n\n\\end\\\n");
  // alpha* solves acoustic(beul) + a*lm(beul) = acoustic(beuk) + a*lm(beuk).
  const auto lp = post.data();
  const double ac_beul = oracle::ctc_forward(lp, 5, 7, 0, {2, 3, 4, 5});
  const double ac_beuk = oracle::ctc_forward(lp, 5, 7, 0, {2, 3, 4, 6});
  const double lm_beul = -2.5 * std::log(10.0), lm_beuk = -0.2 * std::log(10.0);
  const double alpha_star = (ac_beul - ac_beuk) / (lm_beuk - lm_beul);
  std::optional<double> first_flip;
  for (int i = 0; i <= 200; ++i) {
    DecoderConfig cfg;
    cfg.alpha = 0.01 * i;
    const auto words = beam_search_decode(post, vocab, &lm, cfg).words;
    const bool flipped = words == Words{"beuk"};
    c.expect(flipped || words == Words{"beul"}, "unexpected output");
    if (flipped && !first_flip) first_flip = cfg.alpha;
    if (first_flip) c.expect(flipped, "output flipped back");
  }
  c.expect(first_flip.has_value(), "never flipped");
  if (first_flip) c.expect(std::abs(*first_flip - alpha_star) <= 0.01 + 1e-12, "flip away from threshold");
  std::ostringstream d;
  d << "alpha* = " << alpha_star << ", first flip at " << (first_flip ? *first_flip : -1.0);
  detail = d.str() + (c.ok ? "" : "; " + c.detail.str());
  return c.ok;
}

// 4. ARPA back-off values and round trip.
bool criterion4(std::string &detail) {
  Check c;
  const std::string text =
      "\\data\\\nngram 1=3\nngram 2=1\n\n\\1-grams:\n-0.5\ta\t-0.3\n-0.4\tb\t-0.2\n-0.7\tc\n\n"
      "\\2-grams:\n-0.1\ta b\n\n\\end\\\n";
  const NGramModel lm = parse_arpa(text);
  const double ln10 = std::log(10.0);
  const std::vector<std::tuple<std::string, Words, double>> cases = {
      {"b", {"a"}, -0.1 * ln10},          {"c", {"a"}, (-0.3 - 0.7) * ln10},
      {"a", {"b"}, (-0.2 - 0.5) * ln10},  {"c", {"b"}, (-0.2 - 0.7) * ln10},
      {"a", {"c"}, -0.5 * ln10},          {"b", {"c"}, -0.4 * ln10},
      {"a", {}, -0.5 * ln10},             {"x", {"a"}, std::log(1e-10)}};
  for (const auto &[w, h, v] : cases) {
    c.expect(std::abs(lm.word_logprob(w, h) - v) <= 1e-12, "P(" + w + ") mismatch");
  }
  const NGramModel back = parse_arpa(serialize_arpa(lm));
  std::mt19937_64 rng(404);
  const Words pool{"a", "b", "c", "zz"};
  for (int i = 0; i < 100; ++i) {
    Words h;
    for (int k = static_cast<int>(rng() % 3); k > 0; --k) h.push_back(pool[rng() % 4]);
    const std::string w = pool[rng() % 4];
    c.expect(back.word_logprob(w, h) == lm.word_logprob(w, h), "round trip changed a query");
  }
  detail = std::to_string(cases.size()) + " hand values, 100 round-trip probes" +
           (c.ok ? "" : "; " + c.detail.str());
  return c.ok;
}

// 5. WER against dynamic-programming and recursive oracles.
bool criterion5(std::string &detail) {
  Check c;
  const Words alphabet{"x", "y", "z"};
  std::vector<Words> lists;
  for (int len = 0; len <= 6; ++len) {
    std::vector<int> idx(static_cast<size_t>(len), 0);
    for (;;) {
      Words w;
      for (int i : idx) w.push_back(alphabet[static_cast<size_t>(i)]);
      lists.push_back(std::move(w));
      int t = len - 1;
      while (t >= 0 && ++idx[static_cast<size_t>(t)] == 3) idx[static_cast<size_t>(t--)] = 0;
      if (t < 0) break;
    }
  }
  size_t pairs = 0;
  for (const auto &h : lists) {
    for (const auto &r : lists) {
      c.expect(align_words(h, r).cost() == oracle::edit_distance(h, r), "DP mismatch");
      ++pairs;
    }
  }
  std::mt19937_64 rng(505);
  for (int i = 0; i < 1000; ++i) {
    Words h(7 + rng() % 24), r(7 + rng() % 24);
    for (auto &w : h) w = alphabet[rng() % 3];
    for (auto &w : r) w = alphabet[rng() % 3];
    c.expect(align_words(h, r).cost() == oracle::edit_distance(h, r), "long DP mismatch");
  }
  for (size_t i = 0; i < lists.size(); i += 7) {
    const auto &h = lists[i];
    const auto &r = lists[lists.size() - 1 - i];
    c.expect(align_words(h, r).cost() == oracle::edit_distance_brute(h, 0, r, 0), "recursion mismatch");
  }
  const double plosive = wer(align_words(normalize_text("de tortelduif zonk klagelijk in de oude beul"),
                                         normalize_text("de tortelduif zonk klagelijk in de oude beuk")));
  c.expect(plosive == 0.125, "plosive pair WER is not 1/8");
  detail = std::to_string(pairs) + " exhaustive pairs, 1000 long pairs, plosive WER " +
           std::to_string(plosive) + (c.ok ? "" : "; " + c.detail.str());
  return c.ok;
}

// 6. WADA-SNR on Gamma speech plus Gaussian noise.
std::vector<double> mixture(size_t n, double snr_db, std::mt19937_64 &rng) {
  std::gamma_distribution<double> gamma(0.4, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<double> s(n), z(n);
  double ps = 0, pn = 0;
  for (size_t i = 0; i < n; ++i) {
    s[i] = gamma(rng) * (sign(rng) ? 1 : -1);
    z[i] = normal(rng);
    ps += s[i] * s[i];
    pn += z[i] * z[i];
  }
  const double g = std::sqrt(ps / (pn * std::pow(10.0, snr_db / 10.0)));
  for (size_t i = 0; i < n; ++i) s[i] += g * z[i];
  return s;
}

bool criterion6(std::string &detail) {
  Check c;
  std::mt19937_64 rng(606);
  double prev_mean = -1e9, worst = 0.0, worst_scale = 0.0;
  for (double snr : {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0}) {
    double sum = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      auto x = mixture(64000, snr, rng);
      const double est = wada_snr_db(x);
      sum += est;
      if (snr >= 0.0) {
        worst = std::max(worst, std::abs(est - snr));
        c.expect(std::abs(est - snr) <= 3.0, "estimate off by more than 3 dB");
      }
      for (double &v : x) v *= 37.5;
      worst_scale = std::max(worst_scale, std::abs(wada_snr_db(x) - est));
    }
    const double mean = sum / 10.0;
    c.expect(mean >= prev_mean, "mean estimate not monotone");
    prev_mean = mean;
  }
  c.expect(worst_scale < 0.01, "not scale invariant");
  std::ostringstream d;
  d << "max |error| in [0, 20] dB = " << worst << " dB, max scale drift = " << worst_scale << " dB";
  detail = d.str() + (c.ok ? "" : "; " + c.detail.str());
  return c.ok;
}

// Shared 12-speaker fixture for criteria 7, 8 and 10.
struct Fixture {
  fs::path dir;
  SynthCorpus corpus;
  std::string assets;
};

const Fixture &fixture() {
  static const Fixture f = [] {
    Fixture x;
    x.dir = oracle::temp_dir("acceptance");
    SynthConfig cfg;
    cfg.speakers = 12;
    cfg.noise_step = 0.05;
    x.corpus = generate_fixture(x.dir, cfg);
    x.assets = "--manifest " + (x.dir / "manifest.jsonl").string() + " --vocab " +
               (x.dir / "vocab.txt").string() + " --lm " + (x.dir / "lm.arpa").string();
    return x;
  }();
  return f;
}

// 7. End-to-end correlation of the n-gram score with ratings.
bool criterion7(std::string &detail) {
  Check c;
  const auto start = Clock::now();
  const Fixture &f = fixture();
  const fs::path out = f.dir / "eval_ngram";
  const int code = run_cli("eval --methods ngram --out " + out.string() + " " + f.assets);
  c.expect(code == 0, "eval exited with " + std::to_string(code));
  double r = 0.0;
  int points = 0;
  if (code == 0) {
    for (const auto &row : read_csv(out / "correlations.csv")) {
      if (row.size() >= 5 && row[1] == "ngram") {
        r = std::stod(row[3]);
        points = std::stoi(row[4]);
      }
    }
  }
  double pmax = 0.0;
  for (const auto &s : f.corpus.speakers) pmax = std::max(pmax, s.noise_rate);
  c.expect(points == 12, "expected 12 speaker points");
  c.expect(std::abs(pmax - 0.55) < 1e-12, "noise rates do not reach 0.55");
  c.expect(r <= -0.9, "correlation above -0.9");
  const double secs = seconds_since(start);
  c.expect(secs < 60.0, "runtime over 60 s");
  std::ostringstream d;
  d << "r(ngram, rating) = " << r << " over " << points << " speakers, " << secs << " s";
  detail = d.str() + (c.ok ? "" : "; " + c.detail.str());
  return c.ok;
}

// 8. Half-fixing corrector: W_LLM closer to the truth, r_W_LLM negative.
bool criterion8(std::string &detail) {
  Check c;
  const Fixture &f = fixture();
  const fs::path out = f.dir / "eval_llm";
  const int code = run_cli("eval --methods llm --mock --mock-table " +
                           (f.dir / "mock_half_fix.json").string() + " --out " + out.string() +
                           " " + f.assets);
  c.expect(code == 0, "eval exited with " + std::to_string(code));
  if (code != 0) {
    detail = c.detail.str();
    return false;
  }
  // Expected values straight from the generated corpus.
  long greedy_err = 0, llm_err = 0, words = 0;
  std::map<std::string, std::pair<double, int>> per_speaker;
  std::map<std::string, double> rating;
  for (const auto &u : f.corpus.utterances) {
    greedy_err += oracle::edit_distance(u.greedy, u.truth);
    const int e = oracle::edit_distance(u.half_fixed, u.truth);
    llm_err += e;
    words += static_cast<long>(u.truth.size());
    auto &acc = per_speaker[u.record.speaker_id];
    acc.first += static_cast<double>(e) / static_cast<double>(u.truth.size());
    acc.second += 1;
    rating[u.record.speaker_id] = *u.record.rating;
  }
  std::vector<double> xs, ys;
  for (const auto &[spk, acc] : per_speaker) {
    xs.push_back(acc.first / acc.second);
    ys.push_back(rating[spk]);
  }
  const double greedy_wer = static_cast<double>(greedy_err) / static_cast<double>(words);
  const double llm_wer = static_cast<double>(llm_err) / static_cast<double>(words);
  const double r_expected = oracle::pearson_direct(xs, ys);

  const auto rows = read_csv(out / "llm_accuracy.csv");
  c.expect(rows.size() == 2 && rows[0][4] == "greedy_wer_micro" && rows[0][6] == "llm_wer_micro" &&
               rows[0][8] == "r_llm_wer",
           "unexpected llm_accuracy.csv layout");
  if (!c.ok) {
    detail = c.detail.str();
    return false;
  }
  const double got_greedy = std::stod(rows[1][4]), got_llm = std::stod(rows[1][6]);
  const double got_r = std::stod(rows[1][8]);
  c.expect(std::abs(got_greedy - greedy_wer) <= 1e-12, "W_greedy WER differs from corpus");
  c.expect(std::abs(got_llm - llm_wer) <= 1e-12, "W_LLM WER differs from corpus");
  c.expect(std::abs(got_r - r_expected) <= 1e-12, "r_W_LLM differs from corpus");
  c.expect(got_llm < got_greedy, "W_LLM WER not below W_greedy WER");
  c.expect(got_r < 0.0, "r_W_LLM not negative");
  std::ostringstream d;
  d << "W_greedy WER " << got_greedy << ", W_LLM WER " << got_llm << ", r_W_LLM " << got_r;
  detail = d.str() + (c.ok ? "" : "; " + c.detail.str());
  return c.ok;
}

// 9. Statistics helpers.
bool criterion9(std::string &detail) {
  Check c;
  // Two degrees of freedom: F(t) = 1/2 + t / (2 sqrt(2 + t^2)), so the
  // 0.975 quantile is 0.95 * sqrt(2 / (1 - 0.95^2)).
  const double t2 = 0.95 * std::sqrt(2.0 / (1.0 - 0.95 * 0.95));
  c.expect(std::abs(t2 - 4.3027) < 5e-5, "closed-form quantile is not 4.3027");
  const std::vector<double> three{-0.81, -0.86, -0.84};
  const double mean = (-0.81 - 0.86 - 0.84) / 3.0;
  double ss = 0.0;
  for (double v : three) ss += (v - mean) * (v - mean);
  const MeanCi ci = mean_ci(three, 0.95);
  c.expect(std::abs(ci.mean - mean) <= 1e-12, "CI mean mismatch");
  c.expect(std::abs(ci.halfwidth - t2 * std::sqrt(ss / 2.0) / std::sqrt(3.0)) <= 1e-6, "CI halfwidth mismatch");

  const std::vector<double> a{-0.81, -0.86, -0.84}, b{-0.70, -0.74, -0.69};
  const TTestResult tt = two_sample_t(a, b);
  c.expect(std::abs(tt.p_value - 2.0 * oracle::t_cdf_numeric(-std::abs(tt.t_stat), tt.dof)) <= 1e-6,
           "t-test p-value mismatch");
  std::mt19937_64 rng(909);
  std::normal_distribution<double> n(0, 1);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x(3 + i % 30), y(x.size());
    for (size_t k = 0; k < x.size(); ++k) {
      x[k] = n(rng);
      y[k] = x[k] * 0.5 + n(rng);
    }
    c.expect(std::abs(pearson(x, y) - oracle::pearson_direct(x, y)) <= 1e-12, "pearson mismatch");
  }
  const std::vector<double> x{1, 2, 3, 4}, up{3, 5, 7, 9}, down{-1, -3, -5, -7};
  c.expect(pearson(x, up) == 1.0 && pearson(x, down) == -1.0, "perfect fixtures not +-1");
  std::ostringstream d;
  d << "t(0.975, 2) = " << student_t_quantile(0.975, 2) << ", Welch p = " << tt.p_value;
  detail = d.str() + (c.ok ? "" : "; " + c.detail.str());
  return c.ok;
}

// 10. Byte-identical reports across job counts.
bool criterion10(std::string &detail) {
  Check c;
  const Fixture &f = fixture();
  const std::string common = "eval --methods speech_rate,wada_snr,ngram,llm,reference_wer --mock --mock-table " +
                             (f.dir / "mock_half_fix.json").string() + " " + f.assets;
  const fs::path a = f.dir / "det_jobs1", b = f.dir / "det_jobs8";
  c.expect(run_cli(common + " --jobs 1 --parallelism 1 --out " + a.string()) == 0, "first eval failed");
  c.expect(run_cli(common + " --jobs 8 --parallelism 8 --out " + b.string()) == 0, "second eval failed");
  if (c.ok) {
    const std::string ra = oracle::read_file(a / "report.csv");
    c.expect(!ra.empty() && ra == oracle::read_file(b / "report.csv"), "report.csv differs");
    for (const char *name : {"report.txt", "scores.csv", "correlations.csv", "summary.json"}) {
      c.expect(oracle::read_file(a / name) == oracle::read_file(b / name), std::string(name) + " differs");
    }
  }
  detail = std::string("--jobs 1 vs --jobs 8") + (c.ok ? "" : "; " + c.detail.str());
  return c.ok;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<bool(std::string &)>>> criteria = {
      {"CTC beam search matches exhaustive oracle", criterion1},
      {"greedy decoding and collapse", criterion2},
      {"shallow-fusion flip at analytic threshold", criterion3},
      {"ARPA back-off values and round trip", criterion4},
      {"WER alignment matches edit-distance oracles", criterion5},
      {"WADA-SNR accuracy, monotonicity, scale invariance", criterion6},
      {"end-to-end n-gram correlation on synthetic speakers", criterion7},
      {"half-fixing corrector lowers WER, r_W_LLM negative", criterion8},
      {"statistics helpers", criterion9},
      {"determinism across job counts", criterion10},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].second(detail);
    } catch (const std::exception &e) {
      detail = std::string("exception: ") + e.what();
    }
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first
              << " (" << detail << ")" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
