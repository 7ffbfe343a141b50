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

#include "seedforge/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <variant>

#include "seedforge/prompt.hpp"
#include "seedforge/sampler.hpp"
#include "seedforge/text.hpp"

namespace seedforge {
namespace {

using CallResult = std::variant<ChatResponse, Error>;

CallResult call_backend(ChatBackend& chat, const ChatRequest& request) {
  try {
    return chat.complete(request);
  } catch (const Error& e) {
    return e;
  }
}

void check_seed(const CreationConfig& config, const FormattingExample& seed) {
  if (!config.label_mode.is_fixed()) return;
  auto want = config.label_mode.fixed_options();
  auto got = seed.options();
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  if (want != got) {
    throw Error(ErrorCode::kSeedError, "seed options do not match the fixed label space");
  }
}

class Run {
 public:
  Run(const CreationConfig& config, const FormattingExample& seed, ChatBackend& chat,
      Embedder* embedder, const RunObserver& observer)
      : config_(config),
        chat_(chat),
        embedder_(embedder),
        observer_(observer),
        sampler_(config.strategy, seed, config.rng_seed),
        instruction_(render_instruction(config)),
        max_attempts_(config.effective_max_attempts()) {
    if (config.budget_cap) cap_ = Usd::from_dollars(*config.budget_cap);
    report_.embedder_configured = embedder != nullptr;
    cache_.insert(dedup_key(seed));
  }

  RunReport execute(const FormattingExample& seed) {
    try {
      if (embedder_ != nullptr) initial_embedding_ = embedder_->embed(seed.question());
      loop();
    } catch (const Error& e) {
      fail(RunStatus::kBackendFailure, e);
    }
    return std::move(report_);
  }

 private:
  bool done() const { return report_.dataset.size() >= config_.target_count; }

  void fail(RunStatus status, const Error& e) {
    report_.status = status;
    report_.error_code = e.code();
    report_.error_message = e.what();
  }

  void loop() {
    while (!done()) {
      if (report_.iterations >= max_attempts_) {
        fail(RunStatus::kAttemptsExhausted,
             Error(ErrorCode::kAttemptsExhausted, "reached " + std::to_string(max_attempts_) +
                                                      " completion calls with " +
                                                      std::to_string(report_.dataset.size()) + " of " +
                                                      std::to_string(config_.target_count) + " records"));
        return;
      }

      std::vector<FormattingExample> wave = next_wave();
      if (wave.empty()) {
        fail(RunStatus::kBudgetExceeded,
             Error(ErrorCode::kBudgetExceeded, "next call would exceed the budget cap"));
        return;
      }

      const auto results = dispatch(wave);
      std::vector<FormattingExample> retained;
      for (std::size_t i = 0; i < wave.size(); ++i) {
        if (!process(wave[i], results[i], retained)) return;
      }

      if (config_.strategy == Strategy::kTree && !done()) {
        for (auto it = retained.rbegin(); it != retained.rend(); ++it) sampler_.put_back(*it);
        sampler_.advance({}, embedder_);
      }
    }
  }

  // Seeds for the next round of calls: the current seed, plus (Tree only)
  // further frontier seeds up to max_in_flight, trimmed to the attempt and
  // budget limits. Empty means the budget forbids even one call.
  std::vector<FormattingExample> next_wave() {
    std::vector<FormattingExample> wave{sampler_.current()};
    if (config_.strategy == Strategy::kTree) {
      const std::uint32_t room =
          std::min(config_.max_in_flight, max_attempts_ - report_.iterations);
      while (wave.size() < room) {
        auto seed = sampler_.dequeue();
        if (!seed) break;
        wave.push_back(std::move(*seed));
      }
    }
    if (cap_) {
      std::size_t fits = wave.size();
      while (fits > 0) {
        Usd projected = report_.ledger.total();
        for (std::size_t i = 0; i < fits; ++i) projected += max_call_cost_;
        if (projected <= *cap_) break;
        --fits;
      }
      while (wave.size() > std::max<std::size_t>(fits, 1)) {
        sampler_.put_back(std::move(wave.back()));
        wave.pop_back();
      }
      if (fits == 0) return {};
    }
    return wave;
  }

  std::vector<CallResult> dispatch(const std::vector<FormattingExample>& wave) {
    std::vector<ChatRequest> requests;
    requests.reserve(wave.size());
    for (const auto& seed : wave) {
      requests.push_back(
          assemble_request(instruction_, render_format_prompt(seed, config_.label_mode), config_));
    }
    std::vector<CallResult> results;
    results.reserve(wave.size());
    if (wave.size() == 1) {
      results.push_back(call_backend(chat_, requests.front()));
      return results;
    }
    std::vector<std::future<CallResult>> futures;
    futures.reserve(requests.size());
    for (const auto& request : requests) {
      futures.push_back(std::async(std::launch::async,
                                   [this, &request] { return call_backend(chat_, request); }));
    }
    for (auto& f : futures) results.push_back(f.get());
    return results;
  }

  // Returns false when the run must stop.
  bool process(const FormattingExample& seed, const CallResult& result,
               std::vector<FormattingExample>& retained) {
    const std::uint32_t iteration = ++report_.iterations;

    if (const auto* error = std::get_if<Error>(&result)) {
      if (error->code() != ErrorCode::kMalformedResponse) {
        fail(RunStatus::kBackendFailure, *error);
        return false;
      }
      Rejection rejection{iteration, 0, RejectReason::kMalformed, error->what(), ""};
      record_rejections({rejection});
      report_.drift_rows.push_back(DriftRow{iteration, seed.id(), std::nullopt});
      retained.push_back(seed);
      return true;
    }

    const auto& response = std::get<ChatResponse>(result);
    const Usd before = report_.ledger.total();
    report_.ledger.add_usage(response.usage.prompt_tokens, response.usage.completion_tokens,
                             config_.price_per_1k_tokens, response.usage.estimated);
    const Usd call_cost = Usd::from_pico(report_.ledger.total().pico() - before.pico());
    max_call_cost_ = std::max(max_call_cost_, call_cost);

    auto outcome = validate_completion(response.text, config_.label_mode, seed, cache_, iteration);
    record_rejections(outcome.rejections);
    report_.candidates += outcome.accepted.size();
    report_.accepted += outcome.accepted.size();

    report_.drift_rows.push_back(DriftRow{iteration, seed.id(), mean_drift(outcome.accepted)});

    const std::size_t room = config_.target_count - std::min<std::size_t>(report_.dataset.size(),
                                                                            config_.target_count);
    const std::size_t take = std::min(room, outcome.accepted.size());
    report_.truncated += outcome.accepted.size() - take;
    if (take > 0) {
      const std::span<const GeneratedRecord> emitted(outcome.accepted.data(), take);
      if (observer_.on_records) observer_.on_records(emitted);
      report_.dataset.insert(report_.dataset.end(), emitted.begin(), emitted.end());
    }

    if (outcome.accepted.empty()) {
      retained.push_back(seed);
    } else if (config_.strategy == Strategy::kTree) {
      sampler_.enqueue(outcome.accepted);
    } else if (!done()) {
      sampler_.advance(outcome.accepted, embedder_);
    }

    if (cap_ && report_.ledger.total() > *cap_) {
      fail(RunStatus::kBudgetExceeded,
           Error(ErrorCode::kBudgetExceeded, "spend passed the budget cap"));
      return false;
    }
    return true;
  }

  void record_rejections(const std::vector<Rejection>& rejections) {
    for (const auto& r : rejections) report_.rejections.record(r.reason);
    report_.candidates += rejections.size();
    report_.rejected.insert(report_.rejected.end(), rejections.begin(), rejections.end());
    if (observer_.on_rejections && !rejections.empty()) observer_.on_rejections(rejections);
  }

  std::optional<double> mean_drift(const std::vector<GeneratedRecord>& accepted) {
    if (!initial_embedding_ || accepted.empty()) return std::nullopt;
    double sum = 0.0;
    for (const auto& record : accepted) {
      sum += cosine(*initial_embedding_, embedder_->embed(record.example.question()));
    }
    return sum / static_cast<double>(accepted.size());
  }

  const CreationConfig& config_;
  ChatBackend& chat_;
  Embedder* embedder_;
  const RunObserver& observer_;
  SeedSampler sampler_;
  DedupCache cache_;
  std::string instruction_;
  std::uint32_t max_attempts_;
  std::optional<Usd> cap_;
  Usd max_call_cost_;
  std::optional<EmbeddingVector> initial_embedding_;
  RunReport report_;
};

}  // namespace

std::string_view to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::kCompleted: return "completed";
    case RunStatus::kBudgetExceeded: return "budget_exceeded";
    case RunStatus::kAttemptsExhausted: return "attempts_exhausted";
    case RunStatus::kBackendFailure: return "backend_failure";
  }
  return "unknown";
}

RunReport create_dataset(const CreationConfig& config, const FormattingExample& seed,
                         ChatBackend& chat, Embedder* embedder, const RunObserver& observer) {
  config.validate();
  check_seed(config, seed);
  if ((config.strategy == Strategy::kContrastive || config.strategy == Strategy::kSimilar) &&
      embedder == nullptr) {
    throw Error(ErrorCode::kPrecondition,
                std::string(to_string(config.strategy)) + " strategy requires an embedder");
  }
  Run run(config, seed, chat, embedder, observer);
  return run.execute(seed);
}

double estimate_cost(const CreationConfig& config, std::span<const BatchObservation> observed) {
  if (observed.empty()) throw Error(ErrorCode::kPrecondition, "cost estimate needs at least one batch");
  double tokens = 0.0;
  double accepted = 0.0;
  for (const auto& b : observed) {
    tokens += static_cast<double>(b.tokens);
    accepted += b.accepted;
  }
  const double n = static_cast<double>(observed.size());
  const double mean_tokens = tokens / n;
  const double mean_accepted = accepted / n;
  if (mean_accepted <= 0.0) return std::numeric_limits<double>::infinity();
  const double batches = std::ceil(static_cast<double>(config.target_count) / mean_accepted);
  return batches * mean_tokens / 1000.0 * config.price_per_1k_tokens;
}

double estimate_cost_from_prompt(const CreationConfig& config, const FormattingExample& seed) {
  const auto prompt = render_prompt(config, seed);
  const auto quarter = [](std::size_t chars) { return static_cast<std::int64_t>((chars + 3) / 4); };
  const std::int64_t example_tokens = quarter(count_code_points(prompt.user_example));
  const std::int64_t per_batch = quarter(count_code_points(prompt.system_instruction)) +
                                 example_tokens +
                                 static_cast<std::int64_t>(config.batch_size) * example_tokens;
  const BatchObservation one{per_batch, config.batch_size};
  return estimate_cost(config, std::span<const BatchObservation>(&one, 1));
}

}  // namespace seedforge
