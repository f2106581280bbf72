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

#include "ctc_decoder.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "error.h"

namespace asrinc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Prefix trie shared by all hypotheses of one utterance. A node is a
// collapsed prefix; its LM context is a pure function of the prefix, which
// is what makes merging hypotheses by summing their masses sound.
class PrefixTrie {
 public:
  struct Node {
    int32_t parent = -1;
    int32_t label = -1;
    std::vector<std::pair<int32_t, int32_t>> children;
    std::string partial_word;
    std::vector<std::string> history;
    double lm_logp = 0.0;
    int64_t word_count = 0;
  };

  PrefixTrie(const Vocabulary &vocab, const NGramModel *lm) : vocab_(vocab), lm_(lm) {
    Node root;
    if (lm_ && lm_->has_sentence_boundaries()) root.history.emplace_back(kSentenceStart);
    nodes_.push_back(std::move(root));
  }

  const Node &node(int32_t id) const { return nodes_[id]; }

  int32_t child(int32_t parent, int32_t label) {
    for (const auto &[l, id] : nodes_[parent].children) {
      if (l == label) return id;
    }
    Node n;
    n.parent = parent;
    n.label = label;
    const Node &p = nodes_[parent];
    if (label == vocab_.delimiter_index()) {
      n.history = p.history;
      n.lm_logp = p.lm_logp;
      n.word_count = p.word_count;
      if (!p.partial_word.empty()) complete_word(p.partial_word, &n);
    } else {
      n.partial_word = p.partial_word + vocab_.symbol(label);
      n.history = p.history;
      n.lm_logp = p.lm_logp;
      n.word_count = p.word_count;
    }
    const auto id = static_cast<int32_t>(nodes_.size());
    nodes_.push_back(std::move(n));
    nodes_[parent].children.emplace_back(label, id);
    return id;
  }

  // Scores the word into n's LM state.
  void complete_word(const std::string &unit_string, Node *n) const {
    const std::string word = to_lower_utf8(unit_string);
    if (lm_) {
      n->lm_logp += lm_->word_logprob_folded(word, n->history);
      n->history.push_back(word);
      const size_t keep = static_cast<size_t>(std::max(lm_->order() - 1, 0));
      if (n->history.size() > keep) {
        n->history.erase(n->history.begin(),
                         n->history.begin() + static_cast<long>(n->history.size() - keep));
      }
    }
    n->word_count += 1;
  }

  // LM mass and word count after closing the final partial word and adding
  // the end-of-sentence term.
  std::pair<double, int64_t> finalize(int32_t id) const {
    Node n = nodes_[id];
    if (!n.partial_word.empty()) complete_word(n.partial_word, &n);
    if (lm_ && lm_->has_sentence_boundaries()) {
      n.lm_logp += lm_->word_logprob_folded(kSentenceEnd, n.history);
    }
    return {n.lm_logp, n.word_count};
  }

  std::vector<int32_t> prefix(int32_t id) const {
    std::vector<int32_t> out;
    for (int32_t cur = id; cur > 0; cur = nodes_[cur].parent) out.push_back(nodes_[cur].label);
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  const Vocabulary &vocab_;
  const NGramModel *lm_;
  std::vector<Node> nodes_;
};

struct Beam {
  int32_t node;
  double logp_blank;
  double logp_nonblank;
  double fused;

  double total() const { return log_add(logp_blank, logp_nonblank); }
};

// Orders by fused score, then by the lexicographically smaller prefix.
void rank(std::vector<Beam> *beams, const PrefixTrie &trie) {
  std::sort(beams->begin(), beams->end(), [&](const Beam &a, const Beam &b) {
    if (a.fused != b.fused) return a.fused > b.fused;
    if (a.node == b.node) return false;
    return trie.prefix(a.node) < trie.prefix(b.node);
  });
}

}  // namespace

RawPath greedy_decode(const PosteriorMatrix &posteriors) {
  RawPath path;
  path.labels.reserve(static_cast<size_t>(posteriors.frame_count()));
  for (int32_t t = 0; t < posteriors.frame_count(); ++t) {
    const auto row = posteriors.row(t);
    int32_t best = 0;
    for (int32_t k = 1; k < static_cast<int32_t>(row.size()); ++k) {
      if (row[k] > row[best]) best = k;
    }
    path.labels.push_back(best);
  }
  return path;
}

std::vector<int32_t> collapse_labels(const std::vector<int32_t> &labels, int32_t blank) {
  std::vector<int32_t> out;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i > 0 && labels[i] == labels[i - 1]) continue;
    if (labels[i] != blank) out.push_back(labels[i]);
  }
  return out;
}

std::vector<std::string> labels_to_words(const std::vector<int32_t> &collapsed,
                                         const Vocabulary &vocab) {
  std::vector<std::string> words;
  std::string current;
  for (int32_t label : collapsed) {
    if (label == vocab.delimiter_index()) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current += vocab.symbol(label);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

Transcript collapse(const RawPath &raw, const Vocabulary &vocab, TranscriptSource source) {
  for (int32_t label : raw.labels) {
    if (label < 0 || label >= vocab.size()) {
      fail(ErrorCode::kInvalidArgument, "path label " + std::to_string(label) +
                                            " outside the vocabulary");
    }
  }
  const auto words = labels_to_words(collapse_labels(raw.labels, vocab.blank_index()), vocab);
  return Transcript::from_text(join_words(words), source);
}

double fused_score(double acoustic_logp, double lm_logp, int64_t word_count,
                   const DecoderConfig &config) {
  return acoustic_logp + config.alpha * lm_logp + config.beta * static_cast<double>(word_count);
}

double BeamHypothesis::acoustic_logp() const { return log_add(logp_blank, logp_nonblank); }

std::vector<BeamHypothesis> beam_search(const PosteriorMatrix &posteriors,
                                        const Vocabulary &vocab, const NGramModel *lm,
                                        const DecoderConfig &config) {
  if (config.beam_width < 1) fail(ErrorCode::kInvalidArgument, "beam width must be >= 1");
  if (config.alpha < 0.0) fail(ErrorCode::kInvalidArgument, "alpha must be >= 0");
  if (posteriors.vocab_size() != vocab.size()) {
    fail(ErrorCode::kDimensionMismatch, "posterior columns do not match the vocabulary");
  }
  const int32_t blank = vocab.blank_index();
  const int32_t units = vocab.size();
  const double floor = config.prune_logp_floor;

  PrefixTrie trie(vocab, lm);
  auto node_fused = [&](int32_t node, double total) {
    const auto &n = trie.node(node);
    return fused_score(total, n.lm_logp, n.word_count, config);
  };

  std::vector<Beam> beams{{0, 0.0, kNegInf, 0.0}};
  std::unordered_map<int32_t, std::pair<double, double>> next;
  std::vector<int32_t> order;

  for (int32_t t = 0; t < posteriors.frame_count(); ++t) {
    const auto lp = posteriors.row(t);
    const double frame_best = *std::max_element(lp.begin(), lp.end());
    next.clear();
    order.clear();
    auto slot = [&](int32_t node) -> std::pair<double, double> & {
      auto [it, inserted] = next.try_emplace(node, kNegInf, kNegInf);
      if (inserted) order.push_back(node);
      return it->second;
    };

    for (const Beam &b : beams) {
      const double total = b.total();
      const int32_t last = b.node == 0 ? -1 : trie.node(b.node).label;

      auto &self = slot(b.node);
      self.first = log_add(self.first, total + lp[blank]);
      if (last >= 0) self.second = log_add(self.second, b.logp_nonblank + lp[last]);

      for (int32_t c = 0; c < units; ++c) {
        if (c == blank || lp[c] < frame_best + floor) continue;
        const double contrib = (c == last ? b.logp_blank : total) + lp[c];
        if (contrib == kNegInf) continue;
        auto &ext = slot(trie.child(b.node, c));
        ext.second = log_add(ext.second, contrib);
      }
    }

    std::vector<Beam> candidates;
    candidates.reserve(order.size());
    double best_total = kNegInf;
    for (int32_t node : order) {
      const auto &[pb, pnb] = next[node];
      const double total = log_add(pb, pnb);
      if (total == kNegInf) continue;
      best_total = std::max(best_total, total);
      candidates.push_back({node, pb, pnb, node_fused(node, total)});
    }
    if (candidates.empty()) {
      fail(ErrorCode::kEmptyBeam, "all hypotheses pruned at frame " + std::to_string(t));
    }
    std::erase_if(candidates, [&](const Beam &b) { return b.total() < best_total + floor; });
    rank(&candidates, trie);
    if (candidates.size() > static_cast<size_t>(config.beam_width)) {
      candidates.resize(static_cast<size_t>(config.beam_width));
    }
    beams = std::move(candidates);
  }

  for (Beam &b : beams) {
    const auto [lm_logp, words] = trie.finalize(b.node);
    b.fused = fused_score(b.total(), lm_logp, words, config);
  }
  rank(&beams, trie);

  std::vector<BeamHypothesis> out;
  out.reserve(beams.size());
  for (const Beam &b : beams) {
    BeamHypothesis h;
    h.prefix = trie.prefix(b.node);
    h.logp_blank = b.logp_blank;
    h.logp_nonblank = b.logp_nonblank;
    std::tie(h.lm_logp, h.word_count) = trie.finalize(b.node);
    h.fused_score = b.fused;
    out.push_back(std::move(h));
  }
  return out;
}

Transcript beam_search_decode(const PosteriorMatrix &posteriors, const Vocabulary &vocab,
                              const NGramModel *lm, const DecoderConfig &config) {
  const auto hyps = beam_search(posteriors, vocab, lm, config);
  return Transcript::from_text(join_words(labels_to_words(hyps.front().prefix, vocab)),
                               TranscriptSource::kNgramReference);
}

}  // namespace asrinc
