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

#include "posteriors.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "error.h"

namespace asrinc {

namespace {

constexpr char kMagic[4] = {'C', 'T', 'C', 'P'};
constexpr uint32_t kVersion = 1;

uint32_t read_u32le(const unsigned char *p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

void append_u32le(std::string *out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void validate(const std::vector<double> &data, int32_t frames, int32_t vocab,
              const PosteriorValidation &validation) {
  for (int32_t t = 0; t < frames; ++t) {
    double mass = 0.0;
    for (int32_t k = 0; k < vocab; ++k) {
      const double v = data[static_cast<size_t>(t) * vocab + k];
      if (!std::isfinite(v)) {
        fail(ErrorCode::kNonFiniteEntry, "non-finite log-probability at frame " +
                                             std::to_string(t) + ", unit " + std::to_string(k));
      }
      if (validation.check_normalization && v > 0.0) {
        fail(ErrorCode::kPositiveEntry,
             "positive log-probability at frame " + std::to_string(t) + ", unit " +
                 std::to_string(k));
      }
      mass += std::exp(v);
    }
    if (validation.check_normalization && std::abs(mass - 1.0) > validation.row_sum_tolerance) {
      std::ostringstream msg;
      msg << "frame " << t << " sums to " << mass << " in probability space";
      fail(ErrorCode::kRowNotNormalized, msg.str());
    }
  }
}

PosteriorMatrix parse_ctcp(const std::string &bytes, const std::string &id, int32_t expected_v,
                           const PosteriorValidation &validation) {
  const auto *p = reinterpret_cast<const unsigned char *>(bytes.data());
  if (bytes.size() < 16) fail(ErrorCode::kTruncatedFile, "CTCP header truncated");
  const uint32_t version = read_u32le(p + 4);
  if (version != kVersion) {
    fail(ErrorCode::kUnsupportedVersion, "unsupported CTCP version " + std::to_string(version));
  }
  const uint32_t frames = read_u32le(p + 8);
  const uint32_t vocab = read_u32le(p + 12);
  if (frames == 0) fail(ErrorCode::kMalformedMatrix, "posterior matrix has zero frames");
  if (expected_v >= 0 && vocab != static_cast<uint32_t>(expected_v)) {
    fail(ErrorCode::kDimensionMismatch, "matrix has " + std::to_string(vocab) +
                                            " columns, vocabulary has " +
                                            std::to_string(expected_v));
  }
  const uint64_t count = static_cast<uint64_t>(frames) * vocab;
  if (bytes.size() - 16 < count * 4) fail(ErrorCode::kTruncatedFile, "CTCP payload truncated");
  std::vector<double> data(count);
  for (uint64_t i = 0; i < count; ++i) {
    const uint32_t bits = read_u32le(p + 16 + 4 * i);
    data[i] = static_cast<double>(std::bit_cast<float>(bits));
  }
  return PosteriorMatrix(id, static_cast<int32_t>(frames), static_cast<int32_t>(vocab),
                         std::move(data), validation);
}

PosteriorMatrix parse_text(const std::string &text, const std::string &id, int32_t expected_v,
                           const PosteriorValidation &validation) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) fail(ErrorCode::kEmptyFile, "posterior file is empty");
  long long frames = -1, vocab = -1;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> frames >> vocab) || (header >> extra) || frames < 1 || vocab < 1) {
      fail(ErrorCode::kMalformedMatrix, "line 1: expected header 'T V' with positive integers");
    }
  }
  if (expected_v >= 0 && vocab != expected_v) {
    fail(ErrorCode::kDimensionMismatch, "matrix has " + std::to_string(vocab) +
                                            " columns, vocabulary has " +
                                            std::to_string(expected_v));
  }
  std::vector<double> data;
  data.reserve(static_cast<size_t>(frames * vocab));
  for (long long t = 0; t < frames; ++t) {
    if (!next_line()) {
      fail(ErrorCode::kTruncatedFile, "expected " + std::to_string(frames) + " rows, found " +
                                          std::to_string(t));
    }
    std::istringstream row(line);
    std::string tok;
    long long cols = 0;
    while (row >> tok) {
      char *end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') {
        fail(ErrorCode::kMalformedMatrix,
             "line " + std::to_string(line_no) + ": not a number: '" + tok + "'");
      }
      data.push_back(v);
      ++cols;
    }
    if (cols != vocab) {
      fail(ErrorCode::kDimensionMismatch, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(vocab) + " values, found " +
                                              std::to_string(cols));
    }
  }
  if (next_line()) {
    fail(ErrorCode::kMalformedMatrix,
         "line " + std::to_string(line_no) + ": unexpected data after " +
             std::to_string(frames) + " rows");
  }
  return PosteriorMatrix(id, static_cast<int32_t>(frames), static_cast<int32_t>(vocab),
                         std::move(data), validation);
}

}  // namespace

PosteriorMatrix::PosteriorMatrix(std::string utterance_id, int32_t frame_count,
                                 int32_t vocab_size, std::vector<double> log_probs,
                                 const PosteriorValidation &validation)
    : utterance_id_(std::move(utterance_id)),
      frames_(frame_count),
      vocab_size_(vocab_size),
      data_(std::move(log_probs)) {
  if (frames_ < 1) fail(ErrorCode::kMalformedMatrix, "posterior matrix has zero frames");
  if (vocab_size_ < 1) fail(ErrorCode::kMalformedMatrix, "posterior matrix has zero columns");
  if (data_.size() != static_cast<size_t>(frames_) * vocab_size_) {
    fail(ErrorCode::kDimensionMismatch, "posterior data size does not equal T*V");
  }
  validate(data_, frames_, vocab_size_, validation);
}

PosteriorMatrix parse_posteriors(const std::string &bytes, const std::string &utterance_id,
                                 int32_t expected_vocab_size,
                                 const PosteriorValidation &validation) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0) {
    return parse_ctcp(bytes, utterance_id, expected_vocab_size, validation);
  }
  // Text matrices start with a decimal header; anything else carrying
  // non-printable bytes is a binary file with the wrong magic.
  for (size_t i = 0; i < std::min<size_t>(bytes.size(), 16); ++i) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    if (c < 0x09 || (c > 0x0d && c < 0x20) || c > 0x7e) {
      fail(ErrorCode::kBadMagic, "posterior file is neither CTCP nor a text matrix");
    }
  }
  return parse_text(bytes, utterance_id, expected_vocab_size, validation);
}

PosteriorMatrix load_posteriors(const std::filesystem::path &path, const Vocabulary &vocab,
                                const PosteriorValidation &validation) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open posteriors " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_posteriors(ss.str(), path.stem().string(), vocab.size(), validation);
}

std::string encode_ctcp(const PosteriorMatrix &matrix) {
  std::string out(kMagic, 4);
  append_u32le(&out, kVersion);
  append_u32le(&out, static_cast<uint32_t>(matrix.frame_count()));
  append_u32le(&out, static_cast<uint32_t>(matrix.vocab_size()));
  out.reserve(out.size() + matrix.data().size() * 4);
  for (double v : matrix.data()) append_u32le(&out, std::bit_cast<uint32_t>(static_cast<float>(v)));
  return out;
}

std::string encode_text_matrix(const PosteriorMatrix &matrix) {
  std::ostringstream out;
  out << matrix.frame_count() << ' ' << matrix.vocab_size() << '\n';
  out << std::setprecision(17);
  for (int32_t t = 0; t < matrix.frame_count(); ++t) {
    const auto row = matrix.row(t);
    for (size_t k = 0; k < row.size(); ++k) out << (k ? " " : "") << row[k];
    out << '\n';
  }
  return out.str();
}

void write_posteriors(const std::filesystem::path &path, const PosteriorMatrix &matrix,
                      bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << (binary ? encode_ctcp(matrix) : encode_text_matrix(matrix));
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace asrinc
