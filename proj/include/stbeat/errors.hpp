// include/stbeat/errors.hpp

// Copyright 2026  The stbeat authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STBEAT_ERRORS_HPP
#define STBEAT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace stbeat {

enum class ErrorCode {
  kFileUnreadable,       // missing file or malformed container
  kUnsupportedEncoding,  // decodable container, unsupported sample format
  kEmptyAudio,           // zero-length audio stream
  kInvalidConfig,        // parameter violates a documented constraint
  kInsufficientAudio,    // input too short for the requested analysis grid
  kInvalidInput,         // non-finite or otherwise malformed numeric input
  kDegenerateEnvelope,   // all-zero onset envelope, nothing to normalize
  kNoPeriod,             // no usable gap vector to derive a tempo from
  kIoError,              // write/read failure on an output artifact
};

/// Exception for all recoverable errors; `code()` distinguishes the cause.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when no subband's regularity score is within epsilon of 1.
/// Carries every band score (0 for degenerate bands) for diagnostics.
class IsolationFailure : public std::runtime_error {
 public:
  IsolationFailure(std::vector<double> band_scores,
                   std::vector<int> degenerate_bands)
      : std::runtime_error("isolation failure: no subband score within "
                           "epsilon of 1"),
        band_scores_(std::move(band_scores)),
        degenerate_bands_(std::move(degenerate_bands)) {}

  const std::vector<double>& band_scores() const { return band_scores_; }
  const std::vector<int>& degenerate_bands() const { return degenerate_bands_; }

 private:
  std::vector<double> band_scores_;
  std::vector<int> degenerate_bands_;  // 1-based indices of all-zero bands
};

}  // namespace stbeat

#endif  // STBEAT_ERRORS_HPP
