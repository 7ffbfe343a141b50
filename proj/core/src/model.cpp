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

#include "seedforge/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_set>
#include <utility>

#include "seedforge/error.hpp"
#include "seedforge/text.hpp"

namespace seedforge {
namespace {

bool has_normalized_duplicate(const std::vector<std::string>& options) {
  std::unordered_set<std::string> seen;
  for (const auto& option : options) {
    if (!seen.insert(normalize_text(option)).second) return true;
  }
  return false;
}

// FNV-1a, 64-bit. Stable across platforms, which std::hash is not.
class Fnv1a {
 public:
  void update(std::string_view bytes) noexcept {
    for (const char c : bytes) {
      hash_ ^= static_cast<unsigned char>(c);
      hash_ *= 0x100000001b3ULL;
    }
  }
  void separator(unsigned char tag) noexcept {
    hash_ ^= tag;
    hash_ *= 0x100000001b3ULL;
  }
  std::uint64_t value() const noexcept { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

std::string content_id(const std::string& question, const std::vector<std::string>& options,
                       const std::string& answer, const std::optional<std::string>& context) {
  Fnv1a h;
  h.update(question);
  h.separator(0x1);
  for (const auto& option : options) {
    h.update(option);
    h.separator(0x2);
  }
  h.separator(0x3);
  h.update(answer);
  if (context) {
    h.separator(0x4);
    h.update(*context);
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "ex-%016llx", static_cast<unsigned long long>(h.value()));
  return buf;
}

}  // namespace

LabelMode LabelMode::fixed(std::vector<std::string> options) {
  if (options.empty()) {
    throw Error(ErrorCode::kInvalidLabelMode, "fixed label mode needs at least one option");
  }
  if (has_normalized_duplicate(options)) {
    throw Error(ErrorCode::kInvalidLabelMode, "fixed label mode options must be distinct");
  }
  return LabelMode(Kind::kFixed, std::move(options));
}

std::string_view to_string(LabelMode::Kind kind) noexcept {
  return kind == LabelMode::Kind::kFixed ? "fixed" : "variable";
}

FormattingExample FormattingExample::create(std::string question,
                                            std::vector<std::string> options,
                                            std::string answer,
                                            std::optional<std::string> context,
                                            std::optional<std::string> id) {
  if (normalize_text(question).empty()) {
    throw Error(ErrorCode::kEmptyQuestion, "question is empty");
  }
  if (options.size() < 2) {
    throw Error(ErrorCode::kTooFewOptions,
                "need at least 2 options, got " + std::to_string(options.size()));
  }
  if (has_normalized_duplicate(options)) {
    throw Error(ErrorCode::kDuplicateOptions, "options are not pairwise distinct");
  }
  if (std::find(options.begin(), options.end(), answer) == options.end()) {
    throw Error(ErrorCode::kAnswerNotInOptions, "answer \"" + answer + "\" is not one of the options");
  }

  FormattingExample ex;
  ex.id_ = id ? std::move(*id) : content_id(question, options, answer, context);
  ex.question_ = std::move(question);
  ex.options_ = std::move(options);
  ex.answer_ = std::move(answer);
  ex.context_ = std::move(context);
  return ex;
}

FormattingExample FormattingExample::with_id(std::string id) const {
  FormattingExample copy = *this;
  copy.id_ = std::move(id);
  return copy;
}

bool FormattingExample::same_content(const FormattingExample& other) const noexcept {
  return question_ == other.question_ && options_ == other.options_ &&
         answer_ == other.answer_ && context_ == other.context_;
}

std::string_view to_string(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::kRandom: return "random";
    case Strategy::kContrastive: return "contrastive";
    case Strategy::kSimilar: return "similar";
    case Strategy::kTree: return "tree";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "random") return Strategy::kRandom;
  if (lower == "contrastive") return Strategy::kContrastive;
  if (lower == "similar") return Strategy::kSimilar;
  if (lower == "tree") return Strategy::kTree;
  throw Error(ErrorCode::kPrecondition, "unknown strategy \"" + std::string(name) +
                                            "\" (expected random, contrastive, similar or tree)");
}

Usd Usd::from_dollars(double dollars) {
  if (!std::isfinite(dollars)) {
    throw Error(ErrorCode::kPrecondition, "non-finite dollar amount");
  }
  const long double pico = static_cast<long double>(dollars) * kPicoPerDollar;
  if (pico >= static_cast<long double>(std::numeric_limits<std::int64_t>::max()) ||
      pico <= static_cast<long double>(std::numeric_limits<std::int64_t>::min())) {
    throw Error(ErrorCode::kPrecondition, "dollar amount out of range");
  }
  return Usd(std::llround(pico));
}

Usd Usd::operator+(Usd other) const noexcept {
  std::int64_t sum = 0;
  if (__builtin_add_overflow(pico_, other.pico_, &sum)) {
    return Usd(other.pico_ > 0 ? std::numeric_limits<std::int64_t>::max()
                               : std::numeric_limits<std::int64_t>::min());
  }
  return Usd(sum);
}

Usd cost_of_tokens(std::int64_t tokens, double price_per_1k_tokens) {
  if (tokens < 0) throw Error(ErrorCode::kPrecondition, "negative token count");
  if (!std::isfinite(price_per_1k_tokens) || price_per_1k_tokens < 0) {
    throw Error(ErrorCode::kPrecondition, "price per 1K tokens must be finite and >= 0");
  }
  // nano-USD per 1K tokens == pico-USD per token.
  const std::int64_t pico_per_token = std::llround(price_per_1k_tokens * 1e9);
  std::int64_t pico = 0;
  if (__builtin_mul_overflow(tokens, pico_per_token, &pico)) {
    pico = std::numeric_limits<std::int64_t>::max();
  }
  return Usd::from_pico(pico);
}

void CostLedger::add_usage(std::int64_t prompt_tokens, std::int64_t completion_tokens,
                           double price_per_1k_tokens, bool estimated) {
  if (prompt_tokens < 0 || completion_tokens < 0) {
    throw Error(ErrorCode::kPrecondition, "token counts must be non-negative");
  }
  total_ += cost_of_tokens(prompt_tokens + completion_tokens, price_per_1k_tokens);
  prompt_tokens_ += prompt_tokens;
  completion_tokens_ += completion_tokens;
  estimated_ = estimated_ || estimated;
}

CostLedger ledger_add_usage(CostLedger ledger, std::int64_t prompt_tokens,
                            std::int64_t completion_tokens, double price_per_1k_tokens) {
  ledger.add_usage(prompt_tokens, completion_tokens, price_per_1k_tokens);
  return ledger;
}

std::string_view to_string(RejectReason reason) noexcept {
  switch (reason) {
    case RejectReason::kMalformed: return "malformed";
    case RejectReason::kSchemaViolation: return "schema_violation";
    case RejectReason::kOptionMismatch: return "option_mismatch";
    case RejectReason::kDuplicate: return "duplicate";
  }
  return "unknown";
}

void RejectionLog::record(RejectReason reason) noexcept {
  switch (reason) {
    case RejectReason::kMalformed: ++malformed; break;
    case RejectReason::kSchemaViolation: ++schema_violation; break;
    case RejectReason::kOptionMismatch: ++option_mismatch; break;
    case RejectReason::kDuplicate: ++duplicate; break;
  }
}

std::uint64_t RejectionLog::count(RejectReason reason) const noexcept {
  switch (reason) {
    case RejectReason::kMalformed: return malformed;
    case RejectReason::kSchemaViolation: return schema_violation;
    case RejectReason::kOptionMismatch: return option_mismatch;
    case RejectReason::kDuplicate: return duplicate;
  }
  return 0;
}

void CreationConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kPrecondition, what); };
  if (target_count < 1) fail("target_count must be >= 1");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (!std::isfinite(temperature) || temperature < 0) fail("temperature must be finite and >= 0");
  if (!std::isfinite(top_p) || top_p <= 0 || top_p > 1) fail("top_p must lie in (0, 1]");
  if (!std::isfinite(price_per_1k_tokens) || price_per_1k_tokens < 0) {
    fail("price_per_1k_tokens must be >= 0");
  }
  if (budget_cap && (!std::isfinite(*budget_cap) || *budget_cap < 0)) {
    fail("budget_cap must be >= 0");
  }
  if (max_attempts && *max_attempts < 1) fail("max_attempts must be >= 1");
  if (max_in_flight < 1) fail("max_in_flight must be >= 1");
  if (max_in_flight > 1 && strategy != Strategy::kTree) {
    fail("max_in_flight > 1 is only meaningful for the tree strategy");
  }
  if (model_name.empty()) fail("model name is empty");
}

std::uint32_t CreationConfig::effective_max_attempts() const noexcept {
  if (max_attempts) return *max_attempts;
  const std::uint32_t batches = (target_count + batch_size - 1) / batch_size;
  return 10 * batches;
}

}  // namespace seedforge
