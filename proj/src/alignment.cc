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

#include "alignment.h"

#include <algorithm>

#include <json.hpp>

#include "error.h"

namespace asrinc {

std::string_view edit_type_name(EditType type) {
  switch (type) {
    case EditType::kMatch: return "match";
    case EditType::kSubstitute: return "substitute";
    case EditType::kInsert: return "insert";
    case EditType::kDelete: return "delete";
  }
  return "unknown";
}

EditAlignment align_words(const std::vector<std::string> &hyp,
                          const std::vector<std::string> &ref) {
  const size_t h = hyp.size(), r = ref.size();
  // dist[i][j]: edits turning hyp[0..i) into ref[0..j).
  std::vector<int32_t> dist((h + 1) * (r + 1));
  auto at = [&](size_t i, size_t j) -> int32_t & { return dist[i * (r + 1) + j]; };
  for (size_t i = 0; i <= h; ++i) at(i, 0) = static_cast<int32_t>(i);
  for (size_t j = 0; j <= r; ++j) at(0, j) = static_cast<int32_t>(j);
  for (size_t i = 1; i <= h; ++i) {
    for (size_t j = 1; j <= r; ++j) {
      const int32_t diag = at(i - 1, j - 1) + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i, j - 1) + 1, at(i - 1, j) + 1});
    }
  }

  EditAlignment a;
  a.ref_len = static_cast<int32_t>(r);
  a.hyp_len = static_cast<int32_t>(h);
  size_t i = h, j = r;
  while (i > 0 || j > 0) {
    EditOp op;
    if (i > 0 && j > 0 &&
        at(i, j) == at(i - 1, j - 1) + (hyp[i - 1] == ref[j - 1] ? 0 : 1)) {
      const bool same = hyp[i - 1] == ref[j - 1];
      op = {same ? EditType::kMatch : EditType::kSubstitute, static_cast<int32_t>(i - 1),
            static_cast<int32_t>(j - 1), hyp[i - 1], ref[j - 1]};
      --i;
      --j;
    } else if (j > 0 && at(i, j) == at(i, j - 1) + 1) {
      op = {EditType::kDelete, std::nullopt, static_cast<int32_t>(j - 1), std::nullopt, ref[j - 1]};
      --j;
    } else {
      op = {EditType::kInsert, static_cast<int32_t>(i - 1), std::nullopt, hyp[i - 1], std::nullopt};
      --i;
    }
    switch (op.type) {
      case EditType::kMatch: ++a.n_match; break;
      case EditType::kSubstitute: ++a.n_sub; break;
      case EditType::kInsert: ++a.n_ins; break;
      case EditType::kDelete: ++a.n_del; break;
    }
    a.ops.push_back(std::move(op));
  }
  std::reverse(a.ops.begin(), a.ops.end());
  return a;
}

double wer(const EditAlignment &alignment, const WerOptions &options) {
  if (alignment.ref_len == 0) {
    if (alignment.hyp_len == 0) return 0.0;
    return std::min(static_cast<double>(alignment.hyp_len), options.empty_reference_cap);
  }
  return static_cast<double>(alignment.cost()) / alignment.ref_len;
}

void WerAccumulator::add(const EditAlignment &alignment) {
  edits_ += alignment.cost();
  ref_words_ += alignment.ref_len;
  hyp_words_ += alignment.hyp_len;
  wer_sum_ += wer(alignment, options_);
  ++utterances_;
}

double WerAccumulator::micro() const {
  if (ref_words_ == 0) {
    return hyp_words_ == 0 ? 0.0
                           : std::min(static_cast<double>(hyp_words_), options_.empty_reference_cap);
  }
  return static_cast<double>(edits_) / static_cast<double>(ref_words_);
}

double WerAccumulator::macro() const {
  if (utterances_ == 0) fail(ErrorCode::kTooFewValues, "no utterances accumulated");
  return wer_sum_ / static_cast<double>(utterances_);
}

std::vector<DiffSpan> diff_report(const EditAlignment &alignment) {
  std::vector<DiffSpan> spans;
  int32_t hyp_pos = 0, ref_pos = 0;
  for (const EditOp &op : alignment.ops) {
    switch (op.type) {
      case EditType::kMatch:
        ++hyp_pos;
        ++ref_pos;
        break;
      case EditType::kSubstitute:
        spans.push_back({op.type, hyp_pos++, ref_pos++, *op.hyp_word, *op.ref_word});
        break;
      case EditType::kInsert:
        spans.push_back({op.type, hyp_pos++, ref_pos, *op.hyp_word, {}});
        break;
      case EditType::kDelete:
        spans.push_back({op.type, hyp_pos, ref_pos++, {}, *op.ref_word});
        break;
    }
  }
  return spans;
}

std::vector<std::string> apply_diff(const std::vector<std::string> &hyp,
                                    const std::vector<DiffSpan> &spans) {
  std::vector<std::string> out;
  size_t next = 0;  // next unconsumed hyp index
  for (const DiffSpan &s : spans) {
    const auto pos = static_cast<size_t>(s.hyp_pos);
    if (pos < next || pos > hyp.size()) {
      fail(ErrorCode::kInvalidArgument, "diff spans are out of order");
    }
    out.insert(out.end(), hyp.begin() + static_cast<long>(next), hyp.begin() + static_cast<long>(pos));
    next = pos;
    switch (s.type) {
      case EditType::kSubstitute:
        out.push_back(s.ref_word);
        ++next;
        break;
      case EditType::kInsert:
        ++next;
        break;
      case EditType::kDelete:
        out.push_back(s.ref_word);
        break;
      case EditType::kMatch:
        break;
    }
  }
  out.insert(out.end(), hyp.begin() + static_cast<long>(std::min(next, hyp.size())), hyp.end());
  return out;
}

std::string render_diff_text(const EditAlignment &alignment) {
  std::string hyp_line = "HYP:", ref_line = "REF:";
  for (const EditOp &op : alignment.ops) {
    const bool changed = op.type != EditType::kMatch;
    std::string hw = op.hyp_word.value_or("");
    std::string rw = op.ref_word.value_or("");
    if (changed) {
      hw = op.hyp_word ? "**" + hw + "**" : "";
      rw = op.ref_word ? "**" + rw + "**" : "";
    }
    const size_t width = std::max(hw.size(), rw.size());
    if (hw.empty()) hw = std::string(std::max<size_t>(width, 1), '*');
    if (rw.empty()) rw = std::string(std::max<size_t>(width, 1), '*');
    hyp_line += ' ' + hw + std::string(width > hw.size() ? width - hw.size() : 0, ' ');
    ref_line += ' ' + rw + std::string(width > rw.size() ? width - rw.size() : 0, ' ');
  }
  while (!hyp_line.empty() && hyp_line.back() == ' ') hyp_line.pop_back();
  while (!ref_line.empty() && ref_line.back() == ' ') ref_line.pop_back();
  return hyp_line + '\n' + ref_line + '\n';
}

std::string render_diff_jsonl(const std::string &utterance_id,
                              const std::vector<DiffSpan> &spans,
                              const std::string &reference) {
  std::string out;
  for (const DiffSpan &s : spans) {
    nlohmann::ordered_json j;
    j["utterance_id"] = utterance_id;
    if (!reference.empty()) j["reference"] = reference;
    j["op"] = edit_type_name(s.type);
    j["hyp_pos"] = s.hyp_pos;
    j["ref_pos"] = s.ref_pos;
    j["hyp_word"] = s.type == EditType::kDelete ? nlohmann::ordered_json() : nlohmann::ordered_json(s.hyp_word);
    j["ref_word"] = s.type == EditType::kInsert ? nlohmann::ordered_json() : nlohmann::ordered_json(s.ref_word);
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace asrinc
