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

#ifndef ASRINC_ERROR_H_
#define ASRINC_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace asrinc {

// Values mirror asrinc_status in include/asrinc/asrinc.h; keep both in sync.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kIoError = 2,
  kEmptyFile = 3,
  kDuplicateSymbol = 4,
  kMissingBlank = 5,
  kMissingDelimiter = 6,
  kInvalidSymbol = 7,
  kBadMagic = 8,
  kUnsupportedVersion = 9,
  kTruncatedFile = 10,
  kMalformedMatrix = 11,
  kDimensionMismatch = 12,
  kNonFiniteEntry = 13,
  kPositiveEntry = 14,
  kRowNotNormalized = 15,
  kMalformedManifest = 16,
  kDuplicateUtterance = 17,
  kMissingDuration = 18,
  kNonPositiveDuration = 19,
  kNotWav = 20,
  kNonMonoAudio = 21,
  kUnsupportedEncoding = 22,
  kEmptyBeam = 23,
  kMalformedArpa = 24,
  kCountMismatch = 25,
  kMissingSection = 26,
  kTruncatedModel = 27,
  kInvalidBackoff = 28,
  kEmptySequence = 29,
  kEmptyReply = 30,
  kEmptySentence = 31,
  kTransportError = 32,
  kAuthError = 33,
  kRateLimited = 34,
  kUnknownMethod = 35,
  kUnknownLanguage = 36,
  kMissingGroundTruth = 37,
  kSilentAudio = 38,
  kInvalidTable = 39,
  kEmptyGroup = 40,
  kDegenerateVariance = 41,
  kLengthMismatch = 42,
  kTooFewValues = 43,
  kMissingRatings = 44,
  kRatingConflict = 45,
  kNoUtterancesSucceeded = 46,
  kMissingConfiguration = 47,
  kInternal = 48,
};

std::string_view error_code_name(ErrorCode code);

// True for errors caused by bad inputs or configuration (CLI exit code 2);
// false for failures that happen while doing otherwise valid work.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string &message);

}  // namespace asrinc

#endif  // ASRINC_ERROR_H_
