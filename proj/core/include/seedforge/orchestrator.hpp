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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedforge/chat_backend.hpp"
#include "seedforge/embedding.hpp"
#include "seedforge/model.hpp"
#include "seedforge/validator.hpp"

namespace seedforge {

enum class RunStatus { kCompleted, kBudgetExceeded, kAttemptsExhausted, kBackendFailure };

std::string_view to_string(RunStatus status) noexcept;

struct DriftRow {
  std::uint32_t iteration = 0;
  std::string seed_id;
  // Mean cosine between the batch's accepted questions and the initial
  // seed's question; absent without an embedder or when nothing was accepted.
  std::optional<double> mean_cosine_to_initial;

  bool operator==(const DriftRow&) const = default;
};

struct RunReport {
  RunStatus status = RunStatus::kCompleted;
  std::optional<ErrorCode> error_code;
  std::string error_message;

  std::vector<GeneratedRecord> dataset;
  CostLedger ledger;
  RejectionLog rejections;
  std::vector<Rejection> rejected;

  // Completion calls made, including failed and fully rejected ones.
  std::uint32_t iterations = 0;
  // Candidate units seen by the validator: parsed records plus one per
  // payload that did not parse. Always equals accepted + rejections.total().
  std::uint64_t candidates = 0;
  // Records the validator accepted, including any cut by final truncation.
  std::uint64_t accepted = 0;
  std::uint64_t truncated = 0;

  std::vector<DriftRow> drift_rows;
  bool embedder_configured = false;

  bool ok() const noexcept { return status == RunStatus::kCompleted; }
};

// Streaming hooks, invoked on the calling thread in iteration order.
struct RunObserver {
  // Each call carries one batch's records, already truncated to the target.
  std::function<void(std::span<const GeneratedRecord>)> on_records;
  std::function<void(std::span<const Rejection>)> on_rejections;
};

/// Runs the creation loop (render, complete, validate, advance) from `seed`
/// until config.target_count records are accepted.
///
/// Throws Error for problems detected before the first call: invalid config
/// (kPrecondition), missing embedder for contrastive/similar (kPrecondition),
/// a seed incompatible with the label mode (kSeedError). Failures during the
/// run are reported through RunReport::status with the partial dataset:
///   kBudgetExceeded     the next call would take spend past budget_cap, or
///                       a call already did
///   kAttemptsExhausted  max_attempts calls made without reaching the target
///   kBackendFailure     chat or embedding backend error (retries included)
/// A MalformedResponse from the backend counts as one kMalformed rejection
/// and the same seed is retried; so is a batch with nothing accepted.
RunReport create_dataset(const CreationConfig& config, const FormattingExample& seed,
                         ChatBackend& chat, Embedder* embedder,
                         const RunObserver& observer = {});

struct BatchObservation {
  std::int64_t tokens = 0;
  std::uint32_t accepted = 0;
};

/// ceil(k / mean accepted per batch) * mean tokens per batch / 1000 * price.
/// Infinite when no observed batch accepted anything. Throws
/// Error(kPrecondition) for an empty sample.
double estimate_cost(const CreationConfig& config, std::span<const BatchObservation> observed);

/// Pre-flight estimate with no observations: one batch is assumed to cost
/// the rendered prompt's estimated tokens plus batch_size copies of the
/// formatting example, and to yield batch_size accepted records.
double estimate_cost_from_prompt(const CreationConfig& config, const FormattingExample& seed);

}  // namespace seedforge
