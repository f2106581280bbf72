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

#ifndef ASRINC_POSTERIORS_H_
#define ASRINC_POSTERIORS_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vocabulary.h"

namespace asrinc {

struct PosteriorValidation {
  // When false, only finiteness is enforced; entries may be positive and
  // rows need not normalize.
  bool check_normalization = true;
  double row_sum_tolerance = 1e-3;
};

// T x V grid of natural-log probabilities, frame-major.
class PosteriorMatrix {
 public:
  PosteriorMatrix(std::string utterance_id, int32_t frame_count, int32_t vocab_size,
                  std::vector<double> log_probs, const PosteriorValidation &validation = {});

  const std::string &utterance_id() const { return utterance_id_; }
  void set_utterance_id(std::string id) { utterance_id_ = std::move(id); }
  int32_t frame_count() const { return frames_; }
  int32_t vocab_size() const { return vocab_size_; }

  std::span<const double> row(int32_t t) const {
    return {data_.data() + static_cast<size_t>(t) * vocab_size_, static_cast<size_t>(vocab_size_)};
  }
  double at(int32_t t, int32_t k) const { return data_[static_cast<size_t>(t) * vocab_size_ + k]; }
  const std::vector<double> &data() const { return data_; }

 private:
  std::string utterance_id_;
  int32_t frames_;
  int32_t vocab_size_;
  std::vector<double> data_;
};

// Detects CTCP binary vs text matrix by the leading magic bytes. The
// utterance id defaults to the file stem.
PosteriorMatrix load_posteriors(const std::filesystem::path &path, const Vocabulary &vocab,
                                const PosteriorValidation &validation = {});

PosteriorMatrix parse_posteriors(const std::string &bytes, const std::string &utterance_id,
                                 int32_t expected_vocab_size,
                                 const PosteriorValidation &validation = {});

// CTCP v1: "CTCP", u32 version, u32 T, u32 V, T*V float32, all little-endian.
std::string encode_ctcp(const PosteriorMatrix &matrix);
std::string encode_text_matrix(const PosteriorMatrix &matrix);
void write_posteriors(const std::filesystem::path &path, const PosteriorMatrix &matrix,
                      bool binary = true);

}  // namespace asrinc

#endif  // ASRINC_POSTERIORS_H_
