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

#include "ngram_lm.h"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <zlib.h>

#include "error.h"
#include "text.h"

namespace asrinc {

namespace {

constexpr double kLn10 = std::numbers::ln10;

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view s, double *out) {
  const std::string tmp(s);
  char *end = nullptr;
  *out = std::strtod(tmp.c_str(), &end);
  return end != tmp.c_str() && *end == '\0';
}

std::string line_error(int line, const std::string &what) {
  return "ARPA line " + std::to_string(line) + ": " + what;
}

std::string make_key(std::span<const std::string> history, std::string_view word) {
  std::string key;
  for (const auto &h : history) {
    key += h;
    key += ' ';
  }
  key += word;
  return key;
}

std::string read_gzip(const std::filesystem::path &path) {
  gzFile f = gzopen(path.string().c_str(), "rb");
  if (!f) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::string out;
  char buf[1 << 16];
  int n;
  while ((n = gzread(f, buf, sizeof(buf))) > 0) out.append(buf, static_cast<size_t>(n));
  const bool error = n < 0;
  gzclose(f);
  if (error) fail(ErrorCode::kIoError, "gzip decompression failed for " + path.string());
  return out;
}

}  // namespace

NGramModel::NGramModel(int order,
                       std::vector<std::vector<std::pair<std::string, NGramEntry>>> tables,
                       NGramOptions options)
    : order_(order), options_(options), entries_(std::move(tables)) {
  if (order_ < 1 || static_cast<int>(entries_.size()) != order_) {
    fail(ErrorCode::kMalformedArpa, "n-gram tables do not match model order");
  }
  index_.resize(entries_.size());
  for (size_t n = 0; n < entries_.size(); ++n) {
    index_[n].reserve(entries_[n].size());
    for (size_t i = 0; i < entries_[n].size(); ++i) index_[n].emplace(entries_[n][i].first, i);
  }
  has_bos_ = index_[0].count(std::string(kSentenceStart)) > 0;
  has_eos_ = index_[0].count(std::string(kSentenceEnd)) > 0;
  has_unk_ = index_[0].count(std::string(kUnknownWord)) > 0;
}

const NGramEntry *NGramModel::find(int n, const std::string &key) const {
  const auto &idx = index_[n - 1];
  auto it = idx.find(key);
  return it == idx.end() ? nullptr : &entries_[n - 1][it->second].second;
}

bool NGramModel::contains_word(std::string_view word) const {
  return find(1, to_lower_utf8(word)) != nullptr;
}

double NGramModel::word_logprob(std::string_view word,
                                std::span<const std::string> history) const {
  std::vector<std::string> folded;
  folded.reserve(history.size());
  for (const auto &h : history) folded.push_back(to_lower_utf8(h));
  return word_logprob_folded(to_lower_utf8(word), folded);
}

double NGramModel::word_logprob_folded(std::string_view word,
                                       std::span<const std::string> history) const {
  if (history.size() > static_cast<size_t>(order_ - 1)) {
    history = history.subspan(history.size() - (order_ - 1));
  }
  if (!find(1, std::string(word))) {
    if (!has_unk_) return options_.oov_logprob;
    return backoff_logprob(kUnknownWord, history) * kLn10;
  }
  return backoff_logprob(word, history) * kLn10;
}

// log10 P(word | history) by recursive back-off; word is known to exist as a
// unigram.
double NGramModel::backoff_logprob(std::string_view word,
                                   std::span<const std::string> history) const {
  double backoff = 0.0;
  for (size_t start = 0; start <= history.size(); ++start) {
    const auto context = history.subspan(start);
    const int n = static_cast<int>(context.size()) + 1;
    if (const NGramEntry *e = find(n, make_key(context, word))) return backoff + e->log10_prob;
    if (!context.empty()) {
      std::string ctx_key = make_key(context.first(context.size() - 1), context.back());
      if (const NGramEntry *h = find(n - 1, ctx_key); h && h->log10_backoff) {
        backoff += *h->log10_backoff;
      }
    }
  }
  fail(ErrorCode::kInternal, "unigram lookup failed for '" + std::string(word) + "'");
}

double NGramModel::sequence_logprob(std::span<const std::string> words,
                                    bool use_boundaries) const {
  if (words.empty()) fail(ErrorCode::kEmptySequence, "cannot score an empty word sequence");
  const bool boundaries = use_boundaries && has_sentence_boundaries();
  std::vector<std::string> context;
  if (boundaries) context.emplace_back(kSentenceStart);
  double total = 0.0;
  for (const auto &w : words) {
    const std::string folded = to_lower_utf8(w);
    total += word_logprob_folded(folded, context);
    context.push_back(folded);
  }
  if (boundaries) total += word_logprob_folded(kSentenceEnd, context);
  return total;
}

NGramModel parse_arpa(std::string_view text, NGramOptions options) {
  std::vector<std::string_view> lines;
  {
    size_t pos = 0;
    while (pos <= text.size()) {
      size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view l = text.substr(pos, nl - pos);
      if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
      lines.push_back(l);
      pos = nl + 1;
    }
  }

  size_t i = 0;
  while (i < lines.size() && split_ws(lines[i]) != std::vector<std::string_view>{"\\data\\"}) ++i;
  if (i == lines.size()) fail(ErrorCode::kMissingSection, "ARPA file has no \\data\\ section");
  ++i;

  std::vector<long long> declared;
  for (; i < lines.size(); ++i) {
    const auto toks = split_ws(lines[i]);
    if (toks.empty()) {
      if (!declared.empty()) break;
      continue;
    }
    if (toks[0].starts_with("\\")) break;
    const std::string joined = [&] {
      std::string s;
      for (auto t : toks) s += t;
      return s;
    }();
    if (!joined.starts_with("ngram")) {
      fail(ErrorCode::kMalformedArpa, line_error(static_cast<int>(i + 1), "expected 'ngram N=count'"));
    }
    const size_t eq = joined.find('=');
    int n = 0;
    long long count = -1;
    if (eq == std::string::npos ||
        std::from_chars(joined.data() + 5, joined.data() + eq, n).ec != std::errc() ||
        std::from_chars(joined.data() + eq + 1, joined.data() + joined.size(), count).ec !=
            std::errc() ||
        n < 1 || count < 0) {
      fail(ErrorCode::kMalformedArpa, line_error(static_cast<int>(i + 1), "bad ngram count line"));
    }
    if (n != static_cast<int>(declared.size()) + 1) {
      fail(ErrorCode::kMalformedArpa,
           line_error(static_cast<int>(i + 1), "ngram orders must be declared in sequence"));
    }
    declared.push_back(count);
  }
  if (declared.empty()) fail(ErrorCode::kMalformedArpa, "\\data\\ section declares no n-gram counts");
  const int order = static_cast<int>(declared.size());

  std::vector<std::vector<std::pair<std::string, NGramEntry>>> tables(order);
  std::vector<bool> seen(order, false);
  bool ended = false;
  int current = 0;
  for (; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i + 1);
    const auto toks = split_ws(lines[i]);
    if (toks.empty()) continue;
    if (toks[0].starts_with("\\")) {
      if (toks.size() == 1 && toks[0] == "\\end\\") {
        ended = true;
        break;
      }
      int n = 0;
      const std::string_view head = toks[0];
      if (toks.size() != 1 || !head.ends_with("-grams:") ||
          std::from_chars(head.data() + 1, head.data() + head.size(), n).ec != std::errc() ||
          n < 1) {
        fail(ErrorCode::kMalformedArpa, line_error(line_no, "unrecognized section header"));
      }
      if (n > order) {
        fail(ErrorCode::kMalformedArpa,
             line_error(line_no, "section for undeclared order " + std::to_string(n)));
      }
      if (seen[n - 1]) fail(ErrorCode::kMalformedArpa, line_error(line_no, "repeated section"));
      seen[n - 1] = true;
      current = n;
      continue;
    }
    if (current == 0) fail(ErrorCode::kMalformedArpa, line_error(line_no, "n-gram outside a section"));
    const size_t expected = static_cast<size_t>(current) + 1;
    if (toks.size() != expected && toks.size() != expected + 1) {
      fail(ErrorCode::kMalformedArpa,
           line_error(line_no, "expected probability, " + std::to_string(current) +
                                   " word(s) and an optional back-off weight"));
    }
    NGramEntry entry;
    if (!parse_double(toks[0], &entry.log10_prob)) {
      fail(ErrorCode::kMalformedArpa, line_error(line_no, "bad probability"));
    }
    if (toks.size() == expected + 1) {
      if (current == order) {
        fail(ErrorCode::kInvalidBackoff,
             line_error(line_no, "back-off weight on a highest-order n-gram"));
      }
      double bo = 0.0;
      if (!parse_double(toks.back(), &bo)) {
        fail(ErrorCode::kMalformedArpa, line_error(line_no, "bad back-off weight"));
      }
      entry.log10_backoff = bo;
    }
    std::string key;
    for (size_t k = 1; k < expected; ++k) {
      if (k > 1) key += ' ';
      key += toks[k];
    }
    tables[current - 1].emplace_back(std::move(key), entry);
  }
  for (int n = 1; n <= order; ++n) {
    if (!seen[n - 1]) {
      fail(ended ? ErrorCode::kMissingSection : ErrorCode::kTruncatedModel,
           "missing \\" + std::to_string(n) + "-grams: section");
    }
    if (static_cast<long long>(tables[n - 1].size()) != declared[n - 1]) {
      fail(ErrorCode::kCountMismatch,
           "declared ngram " + std::to_string(n) + "=" + std::to_string(declared[n - 1]) +
               " but found " + std::to_string(tables[n - 1].size()));
    }
  }
  if (!ended) fail(ErrorCode::kTruncatedModel, "ARPA file ends without \\end\\");
  return NGramModel(order, std::move(tables), options);
}

NGramModel load_arpa(const std::filesystem::path &path, NGramOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open language model " + path.string());
  unsigned char magic[2] = {0, 0};
  in.read(reinterpret_cast<char *>(magic), 2);
  if (in.gcount() == 2 && magic[0] == 0x1f && magic[1] == 0x8b) {
    in.close();
    return parse_arpa(read_gzip(path), options);
  }
  in.clear();
  in.seekg(0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_arpa(ss.str(), options);
}

std::string serialize_arpa(const NGramModel &model) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "\\data\\\n";
  for (int n = 1; n <= model.order(); ++n) out << "ngram " << n << '=' << model.size(n) << '\n';
  for (int n = 1; n <= model.order(); ++n) {
    out << "\n\\" << n << "-grams:\n";
    for (const auto &[key, e] : model.entries(n)) {
      out << e.log10_prob << '\t';
      for (char c : key) out << (c == ' ' ? '\t' : c);
      if (e.log10_backoff) out << '\t' << *e.log10_backoff;
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
  return out.str();
}

}  // namespace asrinc
