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

#include "seedforge/error.hpp"

namespace seedforge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kAnswerNotInOptions: return "AnswerNotInOptions";
    case ErrorCode::kDuplicateOptions: return "DuplicateOptions";
    case ErrorCode::kEmptyQuestion: return "EmptyQuestion";
    case ErrorCode::kTooFewOptions: return "TooFewOptions";
    case ErrorCode::kInvalidLabelMode: return "InvalidLabelMode";
    case ErrorCode::kPrecondition: return "Precondition";
    case ErrorCode::kAuthError: return "AuthError";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kScriptExhausted: return "ScriptExhausted";
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kEmptyFrontier: return "EmptyFrontier";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kAttemptsExhausted: return "AttemptsExhausted";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kSeedError: return "SeedError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingDriftData: return "MissingDriftData";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace seedforge
