// Copyright 2026 The Seedforge Authors. All Rights Reserved.
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seedforge {

// Every failure surfaced by the library carries one of these codes. Callers
// dispatch on code(); the message is for humans.
enum class ErrorCode {
  // Formatting example construction.
  kAnswerNotInOptions,
  kDuplicateOptions,
  kEmptyQuestion,
  kTooFewOptions,
  kInvalidLabelMode,
  // Generic contract violations (bad arguments, invalid config values).
  kPrecondition,
  // Chat / embedding backends.
  kAuthError,
  kRateLimited,
  kTransport,
  kMalformedResponse,
  kScriptExhausted,
  kEmptyText,
  kDimensionMismatch,
  // Sampler.
  kEmptyBatch,
  kEmptyFrontier,
  // Run control.
  kBudgetExceeded,
  kAttemptsExhausted,
  // Persistence / CLI.
  kConfigError,
  kSeedError,
  kParseError,
  kMissingDriftData,
  kIoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Rate limits and transport hiccups may succeed on a later attempt.
  bool transient() const noexcept {
    return code_ == ErrorCode::kRateLimited || code_ == ErrorCode::kTransport;
  }

 private:
  ErrorCode code_;
};

}  // namespace seedforge
