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

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "seedforge/error.hpp"

namespace seedforge {

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role) noexcept;

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 1.0;
  double top_p = 1.0;
  std::string model_name;
  std::optional<std::uint32_t> max_tokens;

  /// Throws Error(kPrecondition) when there are no messages.
  void validate() const;

  bool operator==(const ChatRequest&) const = default;
};

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  // Set when the endpoint reported no usage and counts were derived from
  // character lengths.
  bool estimated = false;

  std::int64_t total() const noexcept { return prompt_tokens + completion_tokens; }
  bool operator==(const TokenUsage&) const = default;
};

struct ChatResponse {
  std::string text;
  TokenUsage usage;
  // 1-based attempt on which the call succeeded.
  std::uint32_t attempts = 1;
};

/// ceil(code points / 4) for the prompt (all message contents) and the
/// completion separately.
TokenUsage estimate_usage(const ChatRequest& request, std::string_view completion);

/// The language model behind the pipeline. Implementations must be safe to
/// call from several threads at once.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// ---------------------------------------------------------------------------
// Scripted backend

struct ScriptedReply {
  std::string text;
  // Absent usage is estimated, as for an endpoint that omits it.
  std::optional<TokenUsage> usage;
};

struct ScriptedFault {
  ErrorCode code = ErrorCode::kRateLimited;
  std::string message = "scripted fault";
};

using ScriptEntry = std::variant<ScriptedReply, ScriptedFault>;

/// Replays a fixed list of replies and faults, one entry per complete() call,
/// in order. Running past the end throws Error(kScriptExhausted).
class ScriptedBackend final : public ChatBackend {
 public:
  /// Throws Error(kPrecondition) for an empty script.
  explicit ScriptedBackend(std::vector<ScriptEntry> script);

  /// Parses a fixture: a JSON array whose entries are either
  /// {"text": "...", "usage": {"prompt_tokens": n, "completion_tokens": m}}
  /// (usage optional) or {"fault": "rate_limited" | "transport" | "auth" |
  /// "malformed"}.
  static std::vector<ScriptEntry> parse_script(const nlohmann::json& fixture);

  ChatResponse complete(const ChatRequest& request) override;

  std::size_t consumed() const;
  /// Every request seen so far, including ones answered with a fault.
  std::vector<ChatRequest> requests() const;

 private:
  mutable std::mutex mu_;
  std::vector<ScriptEntry> script_;
  std::size_t next_ = 0;
  std::vector<ChatRequest> requests_;
};

// ---------------------------------------------------------------------------
// Retry

struct RetryPolicy {
  std::chrono::milliseconds initial_delay{1000};
  double factor = 2.0;
  // Each delay is scaled by a uniform factor in [1 - jitter, 1 + jitter].
  double jitter = 0.2;
  std::chrono::milliseconds max_delay{30000};
  // Total attempts, including the first.
  std::uint32_t max_attempts = 5;

  /// Delay before retry number `retry` (1-based), given a uniform draw
  /// `unit` in [0, 1).
  std::chrono::milliseconds delay_for(std::uint32_t retry, double unit) const;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// Wraps another backend and retries transient failures (rate limits,
/// transport errors) with capped exponential backoff. Other errors pass
/// through on the first occurrence.
class RetryingBackend final : public ChatBackend {
 public:
  RetryingBackend(std::shared_ptr<ChatBackend> inner, RetryPolicy policy,
                  std::uint64_t jitter_seed = 0, Sleeper sleeper = {});

  ChatResponse complete(const ChatRequest& request) override;

  const RetryPolicy& policy() const noexcept { return policy_; }

 private:
  double next_unit();

  std::shared_ptr<ChatBackend> inner_;
  RetryPolicy policy_;
  Sleeper sleeper_;
  std::mutex rng_mu_;
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// OpenAI-compatible HTTP

struct HttpEndpoint {
  // Full endpoint URL, e.g. https://api.openai.com/v1/chat/completions.
  std::string url;
  std::string api_key;
  std::chrono::seconds timeout{120};
};

/// Environment variable holding the bearer token for HTTP backends.
inline constexpr const char* kApiKeyEnvVar = "SEEDFORGE_API_KEY";

/// Reads kApiKeyEnvVar; throws Error(kAuthError) when unset or empty.
std::string api_key_from_environment();

/// The chat-completions request body: model, messages, temperature, top_p,
/// and max_tokens when set.
nlohmann::ordered_json chat_completion_body(const ChatRequest& request);

/// Interprets a chat-completions response body. Missing usage is estimated
/// from `request`. Throws Error(kMalformedResponse) when the body is not
/// JSON or carries no choices[0].message.content string.
ChatResponse parse_chat_completion_body(std::string_view body, const ChatRequest& request);

/// Maps a non-2xx HTTP status to the matching error: 401/403 -> kAuthError,
/// 429 -> kRateLimited, 408 and 5xx -> kTransport, anything else ->
/// kMalformedResponse.
[[noreturn]] void throw_for_status(int status, std::string_view body);

/// One attempt per call; wrap in RetryingBackend for resilience.
class HttpChatBackend final : public ChatBackend {
 public:
  /// Throws Error(kAuthError) for an empty key and Error(kPrecondition) for
  /// an unparseable URL.
  explicit HttpChatBackend(HttpEndpoint endpoint);

  ChatResponse complete(const ChatRequest& request) override;

 private:
  HttpEndpoint endpoint_;
};

}  // namespace seedforge
