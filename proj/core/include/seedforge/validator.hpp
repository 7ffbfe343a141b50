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

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "seedforge/model.hpp"

namespace seedforge {

// One candidate record located inside a raw completion.
struct PayloadItem {
  nlohmann::json value;
  std::size_t offset = 0;  // byte offset of `raw` within the completion
  std::string raw;         // verbatim source text of the candidate
};

struct JsonPayload {
  std::vector<PayloadItem> items;
};

/// Finds the candidate records in a completion.
///
/// Scans for the first balanced top-level array or object (prose and code
/// fences around it are ignored) and parses it strictly. A value that fails
/// strict parsing is skipped and the scan continues after it; a container
/// that runs off the end of the text (a truncated completion) ends the scan.
/// Shapes accepted:
///   - an array: each element is a candidate;
///   - an object without a "question" key holding exactly one array-valued
///     member ({"examples": [...]}): unwrapped to that array;
///   - a record object: promoted to a one-element list, extended with any
///     further objects that follow it separated only by whitespace or commas.
/// A parsed value containing no object candidates is kept only as a fallback
/// in case nothing better follows. Returns nullopt when nothing parses.
std::optional<JsonPayload> extract_json_payload(std::string_view raw);

struct RecordRejection {
  RejectReason reason = RejectReason::kMalformed;
  std::string detail;
};

using RecordCheck = std::variant<FormattingExample, RecordRejection>;

/// Schema and label-space checks for one candidate against the seed that
/// produced it.
///
///   kMalformed        candidate is not a JSON object
///   kSchemaViolation  missing or mistyped question/options/answer (or context
///                     when the seed has one), empty question, fewer than two
///                     or duplicate options
///   kOptionMismatch   answer not among the options; fixed mode: option set
///                     differs from the seed's (order ignored, exact strings);
///                     variable mode: option count differs from the seed's
///
/// Keys other than question/options/answer/context are ignored.
RecordCheck check_record(const nlohmann::json& candidate, const LabelMode& mode,
                         const FormattingExample& seed,
                         std::optional<std::string> id = std::nullopt);

/// normalize_text() of the question.
std::string dedup_key(const FormattingExample& example);

/// Insert-only set of dedup keys with atomic check-and-insert.
class DedupCache {
 public:
  /// Returns false (and leaves the cache unchanged) when `key` is present.
  bool insert(const std::string& key);
  bool contains(const std::string& key) const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::unordered_set<std::string> keys_;
};

struct Rejection {
  std::uint32_t iteration = 0;
  std::size_t source_offset = 0;
  RejectReason reason = RejectReason::kMalformed;
  std::string detail;
  std::string fragment;  // verbatim raw text

  bool operator==(const Rejection&) const = default;
};

struct ValidationOutcome {
  std::vector<GeneratedRecord> accepted;
  std::vector<Rejection> rejections;

  std::size_t candidates() const noexcept { return accepted.size() + rejections.size(); }
};

/// Identifier given to the candidate at `index` of iteration `iteration`.
std::string generated_id(std::uint32_t iteration, std::size_t index);

/// Validates one raw completion produced from `seed` at `iteration`.
/// A completion with no parseable payload yields a single kMalformed
/// rejection covering the whole text. Valid records are accepted even when
/// siblings in the same batch are rejected. Duplicates (within the batch or
/// against `cache`) are rejected as kDuplicate; accepted keys are inserted.
ValidationOutcome validate_completion(std::string_view raw, const LabelMode& mode,
                                      const FormattingExample& seed, DedupCache& cache,
                                      std::uint32_t iteration);

}  // namespace seedforge
