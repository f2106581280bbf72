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

#include "error.h"

namespace asrinc {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kDuplicateSymbol: return "DuplicateSymbol";
    case ErrorCode::kMissingBlank: return "MissingBlank";
    case ErrorCode::kMissingDelimiter: return "MissingDelimiter";
    case ErrorCode::kInvalidSymbol: return "InvalidSymbol";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kMalformedMatrix: return "MalformedMatrix";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::kPositiveEntry: return "PositiveEntry";
    case ErrorCode::kRowNotNormalized: return "RowNotNormalized";
    case ErrorCode::kMalformedManifest: return "MalformedManifest";
    case ErrorCode::kDuplicateUtterance: return "DuplicateUtterance";
    case ErrorCode::kMissingDuration: return "MissingDuration";
    case ErrorCode::kNonPositiveDuration: return "NonPositiveDuration";
    case ErrorCode::kNotWav: return "NotWav";
    case ErrorCode::kNonMonoAudio: return "NonMonoAudio";
    case ErrorCode::kUnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::kEmptyBeam: return "EmptyBeam";
    case ErrorCode::kMalformedArpa: return "MalformedArpa";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kMissingSection: return "MissingSection";
    case ErrorCode::kTruncatedModel: return "TruncatedModel";
    case ErrorCode::kInvalidBackoff: return "InvalidBackoff";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kEmptyReply: return "EmptyReply";
    case ErrorCode::kEmptySentence: return "EmptySentence";
    case ErrorCode::kTransportError: return "TransportError";
    case ErrorCode::kAuthError: return "AuthError";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kUnknownMethod: return "UnknownMethod";
    case ErrorCode::kUnknownLanguage: return "UnknownLanguage";
    case ErrorCode::kMissingGroundTruth: return "MissingGroundTruth";
    case ErrorCode::kSilentAudio: return "SilentAudio";
    case ErrorCode::kInvalidTable: return "InvalidTable";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kDegenerateVariance: return "DegenerateVariance";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooFewValues: return "TooFewValues";
    case ErrorCode::kMissingRatings: return "MissingRatings";
    case ErrorCode::kRatingConflict: return "RatingConflict";
    case ErrorCode::kNoUtterancesSucceeded: return "NoUtterancesSucceeded";
    case ErrorCode::kMissingConfiguration: return "MissingConfiguration";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk:
    case ErrorCode::kIoError:
    case ErrorCode::kEmptyBeam:
    case ErrorCode::kTransportError:
    case ErrorCode::kAuthError:
    case ErrorCode::kRateLimited:
    case ErrorCode::kEmptyReply:
    case ErrorCode::kNoUtterancesSucceeded:
    case ErrorCode::kInternal:
    case ErrorCode::kDegenerateVariance:
    case ErrorCode::kEmptyGroup:
      return false;
    default:
      return true;
  }
}

void fail(ErrorCode code, const std::string &message) {
  throw Error(code, message);
}

}  // namespace asrinc
