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

#include "seedforge/chat_backend.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "http_transport.hpp"
#include "seedforge/text.hpp"

namespace seedforge {
namespace {

std::int64_t quarter_ceil(std::size_t chars) {
  return static_cast<std::int64_t>((chars + 3) / 4);
}

ErrorCode parse_fault(std::string_view name) {
  if (name == "rate_limited") return ErrorCode::kRateLimited;
  if (name == "transport") return ErrorCode::kTransport;
  if (name == "auth") return ErrorCode::kAuthError;
  if (name == "malformed") return ErrorCode::kMalformedResponse;
  throw Error(ErrorCode::kPrecondition, "unknown scripted fault \"" + std::string(name) + "\"");
}

}  // namespace

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

void ChatRequest::validate() const {
  if (messages.empty()) throw Error(ErrorCode::kPrecondition, "chat request has no messages");
}

TokenUsage estimate_usage(const ChatRequest& request, std::string_view completion) {
  std::size_t prompt_chars = 0;
  for (const auto& m : request.messages) prompt_chars += count_code_points(m.content);
  return TokenUsage{quarter_ceil(prompt_chars), quarter_ceil(count_code_points(completion)), true};
}

// ---------------------------------------------------------------------------

ScriptedBackend::ScriptedBackend(std::vector<ScriptEntry> script) : script_(std::move(script)) {
  if (script_.empty()) throw Error(ErrorCode::kPrecondition, "scripted backend needs at least one entry");
}

std::vector<ScriptEntry> ScriptedBackend::parse_script(const nlohmann::json& fixture) {
  if (!fixture.is_array()) {
    throw Error(ErrorCode::kPrecondition, "script fixture must be a JSON array");
  }
  std::vector<ScriptEntry> script;
  script.reserve(fixture.size());
  for (const auto& entry : fixture) {
    if (!entry.is_object()) throw Error(ErrorCode::kPrecondition, "script entry must be an object");
    if (entry.contains("fault")) {
      ScriptedFault fault;
      fault.code = parse_fault(entry.at("fault").get<std::string>());
      fault.message = entry.value("message", std::string("scripted ") + entry.at("fault").get<std::string>());
      script.emplace_back(std::move(fault));
      continue;
    }
    if (!entry.contains("text") || !entry.at("text").is_string()) {
      throw Error(ErrorCode::kPrecondition, "script entry needs \"text\" or \"fault\"");
    }
    ScriptedReply reply{entry.at("text").get<std::string>(), std::nullopt};
    if (entry.contains("usage")) {
      const auto& u = entry.at("usage");
      reply.usage = TokenUsage{u.at("prompt_tokens").get<std::int64_t>(),
                               u.at("completion_tokens").get<std::int64_t>(), false};
    }
    script.emplace_back(std::move(reply));
  }
  return script;
}

ChatResponse ScriptedBackend::complete(const ChatRequest& request) {
  request.validate();
  std::lock_guard lock(mu_);
  requests_.push_back(request);
  if (next_ >= script_.size()) {
    throw Error(ErrorCode::kScriptExhausted,
                "script exhausted after " + std::to_string(script_.size()) + " entries");
  }
  const ScriptEntry& entry = script_[next_++];
  if (const auto* fault = std::get_if<ScriptedFault>(&entry)) {
    throw Error(fault->code, fault->message);
  }
  const auto& reply = std::get<ScriptedReply>(entry);
  ChatResponse response;
  response.text = reply.text;
  response.usage = reply.usage ? *reply.usage : estimate_usage(request, reply.text);
  return response;
}

std::size_t ScriptedBackend::consumed() const {
  std::lock_guard lock(mu_);
  return next_;
}

std::vector<ChatRequest> ScriptedBackend::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

// ---------------------------------------------------------------------------

std::chrono::milliseconds RetryPolicy::delay_for(std::uint32_t retry, double unit) const {
  const double base = static_cast<double>(initial_delay.count()) *
                      std::pow(factor, static_cast<double>(retry > 0 ? retry - 1 : 0));
  const double scaled = base * (1.0 + jitter * (2.0 * unit - 1.0));
  const double capped = std::min(scaled, static_cast<double>(max_delay.count()));
  return std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(std::max(0.0, capped))));
}

RetryingBackend::RetryingBackend(std::shared_ptr<ChatBackend> inner, RetryPolicy policy,
                                 std::uint64_t jitter_seed, Sleeper sleeper)
    : inner_(std::move(inner)),
      policy_(policy),
      sleeper_(sleeper ? std::move(sleeper)
                       : Sleeper([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); })),
      rng_(jitter_seed) {
  if (!inner_) throw Error(ErrorCode::kPrecondition, "retrying backend needs an inner backend");
  if (policy_.max_attempts < 1) throw Error(ErrorCode::kPrecondition, "max_attempts must be >= 1");
}

double RetryingBackend::next_unit() {
  std::lock_guard lock(rng_mu_);
  // 53 random mantissa bits -> [0, 1).
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

ChatResponse RetryingBackend::complete(const ChatRequest& request) {
  for (std::uint32_t attempt = 1;; ++attempt) {
    try {
      ChatResponse response = inner_->complete(request);
      response.attempts = attempt;
      return response;
    } catch (const Error& e) {
      if (!e.transient() || attempt >= policy_.max_attempts) throw;
    }
    sleeper_(policy_.delay_for(attempt, next_unit()));
  }
}

// ---------------------------------------------------------------------------

std::string api_key_from_environment() {
  const char* key = std::getenv(kApiKeyEnvVar);
  if (key == nullptr || *key == '\0') {
    throw Error(ErrorCode::kAuthError, std::string(kApiKeyEnvVar) + " is not set");
  }
  return key;
}

nlohmann::ordered_json chat_completion_body(const ChatRequest& request) {
  nlohmann::ordered_json body;
  body["model"] = request.model_name;
  auto& messages = body["messages"] = nlohmann::ordered_json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  body["temperature"] = request.temperature;
  body["top_p"] = request.top_p;
  if (request.max_tokens) body["max_tokens"] = *request.max_tokens;
  return body;
}

ChatResponse parse_chat_completion_body(std::string_view body, const ChatRequest& request) {
  const auto doc = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kMalformedResponse, "chat endpoint returned non-JSON payload");
  }
  const auto choices = doc.find("choices");
  if (choices == doc.end() || !choices->is_array() || choices->empty()) {
    throw Error(ErrorCode::kMalformedResponse, "chat response has no choices");
  }
  const auto& first = choices->front();
  if (!first.is_object() || !first.contains("message") || !first["message"].is_object() ||
      !first["message"].contains("content") || !first["message"]["content"].is_string()) {
    throw Error(ErrorCode::kMalformedResponse, "chat response has no message content");
  }

  ChatResponse response;
  response.text = first["message"]["content"].get<std::string>();

  const auto usage = doc.find("usage");
  const bool has_usage = usage != doc.end() && usage->is_object() &&
                         usage->contains("prompt_tokens") && (*usage)["prompt_tokens"].is_number_integer() &&
                         usage->contains("completion_tokens") &&
                         (*usage)["completion_tokens"].is_number_integer();
  if (has_usage) {
    response.usage.prompt_tokens = (*usage)["prompt_tokens"].get<std::int64_t>();
    response.usage.completion_tokens = (*usage)["completion_tokens"].get<std::int64_t>();
    if (response.usage.prompt_tokens < 0 || response.usage.completion_tokens < 0) {
      throw Error(ErrorCode::kMalformedResponse, "chat response reports negative usage");
    }
  } else {
    response.usage = estimate_usage(request, response.text);
  }
  return response;
}

void throw_for_status(int status, std::string_view body) {
  std::string detail = "HTTP " + std::to_string(status);
  if (!body.empty()) detail += ": " + std::string(body.substr(0, 512));
  if (status == 401 || status == 403) throw Error(ErrorCode::kAuthError, detail);
  if (status == 429) throw Error(ErrorCode::kRateLimited, detail);
  if (status == 408 || status >= 500) throw Error(ErrorCode::kTransport, detail);
  throw Error(ErrorCode::kMalformedResponse, detail);
}

HttpChatBackend::HttpChatBackend(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  if (endpoint_.api_key.empty()) throw Error(ErrorCode::kAuthError, "missing API key");
  (void)detail::Url::parse(endpoint_.url);
}

ChatResponse HttpChatBackend::complete(const ChatRequest& request) {
  request.validate();
  const auto url = detail::Url::parse(endpoint_.url);
  const auto result =
      detail::post_json(url, chat_completion_body(request).dump(), endpoint_.api_key, endpoint_.timeout);
  if (result.status < 200 || result.status >= 300) throw_for_status(result.status, result.body);
  return parse_chat_completion_body(result.body, request);
}

}  // namespace seedforge
