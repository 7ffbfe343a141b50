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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace seedforge {

/// Whether the label space travels with each instance (multiple-choice QA)
/// or is one global option set shared by every instance (yes/no QA).
class LabelMode {
 public:
  enum class Kind { kVariable, kFixed };

  static LabelMode variable() { return LabelMode(Kind::kVariable, {}); }

  /// Throws Error(kInvalidLabelMode) when `options` is empty or holds two
  /// entries that normalize to the same text.
  static LabelMode fixed(std::vector<std::string> options);

  Kind kind() const noexcept { return kind_; }
  bool is_fixed() const noexcept { return kind_ == Kind::kFixed; }
  /// Empty in variable mode.
  const std::vector<std::string>& fixed_options() const noexcept { return options_; }

  bool operator==(const LabelMode&) const = default;

 private:
  LabelMode(Kind kind, std::vector<std::string> options)
      : kind_(kind), options_(std::move(options)) {}

  Kind kind_;
  std::vector<std::string> options_;
};

std::string_view to_string(LabelMode::Kind kind) noexcept;

/// One validated (question, options, answer[, context]) instance. The seed
/// handed to the pipeline and every generated record share this shape.
class FormattingExample {
 public:
  /// Validates and builds an example. When `id` is absent a content-derived
  /// identifier is assigned, so equal content yields equal ids.
  ///
  /// Errors (seedforge::Error): kEmptyQuestion, kTooFewOptions,
  /// kDuplicateOptions (compared after normalize_text), kAnswerNotInOptions
  /// (exact string match).
  static FormattingExample create(std::string question,
                                  std::vector<std::string> options,
                                  std::string answer,
                                  std::optional<std::string> context = std::nullopt,
                                  std::optional<std::string> id = std::nullopt);

  const std::string& id() const noexcept { return id_; }
  const std::string& question() const noexcept { return question_; }
  const std::vector<std::string>& options() const noexcept { return options_; }
  const std::string& answer() const noexcept { return answer_; }
  const std::optional<std::string>& context() const noexcept { return context_; }

  FormattingExample with_id(std::string id) const;

  /// Field-by-field equality ignoring the identifier.
  bool same_content(const FormattingExample& other) const noexcept;

  bool operator==(const FormattingExample&) const = default;

 private:
  FormattingExample() = default;

  std::string id_;
  std::string question_;
  std::vector<std::string> options_;
  std::string answer_;
  std::optional<std::string> context_;
};

/// An accepted generated example plus the lineage needed by self-reference.
struct GeneratedRecord {
  FormattingExample example;
  std::uint32_t iteration = 0;
  std::string parent_seed_id;
  std::string dedup_key;
  // Byte offset of the record's fragment within the raw completion text.
  std::size_t source_offset = 0;

  bool operator==(const GeneratedRecord&) const = default;
};

enum class Strategy { kRandom, kContrastive, kSimilar, kTree };

std::string_view to_string(Strategy strategy) noexcept;
/// Case-insensitive; throws Error(kPrecondition) on unknown names.
Strategy parse_strategy(std::string_view name);

/// Money as an exact integer count of 1e-12 USD. Ledger arithmetic never
/// touches floating point; conversion happens only at the edges.
class Usd {
 public:
  static constexpr std::int64_t kPicoPerDollar = 1'000'000'000'000;

  constexpr Usd() = default;
  static constexpr Usd from_pico(std::int64_t pico) { return Usd(pico); }
  /// Rounds to the nearest pico-dollar.
  static Usd from_dollars(double dollars);

  constexpr std::int64_t pico() const noexcept { return pico_; }
  double dollars() const noexcept {
    return static_cast<double>(pico_) / static_cast<double>(kPicoPerDollar);
  }

  /// Saturates at INT64_MAX.
  Usd operator+(Usd other) const noexcept;
  Usd& operator+=(Usd other) noexcept { return *this = *this + other; }
  auto operator<=>(const Usd&) const = default;

 private:
  constexpr explicit Usd(std::int64_t pico) : pico_(pico) {}
  std::int64_t pico_ = 0;
};

/// Cost of `tokens` at `price_per_1k_tokens` USD. The price is quantized to
/// 1e-9 USD per 1K tokens, which makes the product exact in pico-dollars.
Usd cost_of_tokens(std::int64_t tokens, double price_per_1k_tokens);

/// Running token usage and spend for one run.
class CostLedger {
 public:
  /// Counts must be non-negative (Error(kPrecondition) otherwise).
  void add_usage(std::int64_t prompt_tokens, std::int64_t completion_tokens,
                 double price_per_1k_tokens, bool estimated = false);

  std::int64_t prompt_tokens() const noexcept { return prompt_tokens_; }
  std::int64_t completion_tokens() const noexcept { return completion_tokens_; }
  std::int64_t total_tokens() const noexcept { return prompt_tokens_ + completion_tokens_; }
  Usd total() const noexcept { return total_; }
  double total_usd() const noexcept { return total_.dollars(); }
  /// True once any usage was estimated from character counts.
  bool estimated() const noexcept { return estimated_; }

  bool operator==(const CostLedger&) const = default;

 private:
  std::int64_t prompt_tokens_ = 0;
  std::int64_t completion_tokens_ = 0;
  Usd total_;
  bool estimated_ = false;
};

/// Functional form of CostLedger::add_usage.
CostLedger ledger_add_usage(CostLedger ledger, std::int64_t prompt_tokens,
                            std::int64_t completion_tokens,
                            double price_per_1k_tokens);

enum class RejectReason { kMalformed, kSchemaViolation, kOptionMismatch, kDuplicate };

std::string_view to_string(RejectReason reason) noexcept;

struct RejectionLog {
  std::uint64_t malformed = 0;
  std::uint64_t schema_violation = 0;
  std::uint64_t duplicate = 0;
  std::uint64_t option_mismatch = 0;

  void record(RejectReason reason) noexcept;
  std::uint64_t count(RejectReason reason) const noexcept;
  std::uint64_t total() const noexcept {
    return malformed + schema_violation + duplicate + option_mismatch;
  }

  bool operator==(const RejectionLog&) const = default;
};

/// Knobs of one creation run. Defaults:
/// batches of 5, temperature and top_p of 1, 0.002 USD per 1K tokens.
struct CreationConfig {
  std::uint32_t target_count = 1;
  std::uint32_t batch_size = 5;
  Strategy strategy = Strategy::kRandom;
  LabelMode label_mode = LabelMode::variable();
  double temperature = 1.0;
  double top_p = 1.0;
  double price_per_1k_tokens = 0.002;
  std::optional<double> budget_cap;
  // Completion calls allowed before giving up; unset means
  // 10 * ceil(target_count / batch_size).
  std::optional<std::uint32_t> max_attempts;
  std::uint64_t rng_seed = 0;
  std::string model_name = "gpt-3.5-turbo";
  std::optional<std::uint32_t> max_tokens;
  // Concurrent completions over distinct frontier seeds (Tree only).
  std::uint32_t max_in_flight = 1;

  /// Throws Error(kPrecondition) describing the first violated constraint.
  void validate() const;
  std::uint32_t effective_max_attempts() const noexcept;
};

}  // namespace seedforge
