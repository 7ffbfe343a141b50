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

#include "seedforge/validator.hpp"

#include <algorithm>

#include "json_scan.hpp"
#include "seedforge/error.hpp"
#include "seedforge/text.hpp"

namespace seedforge {
namespace {

using detail::Span;

nlohmann::json parse_strict(std::string_view text) {
  return nlohmann::json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
}

PayloadItem make_item(std::string_view raw, Span span, nlohmann::json value) {
  return PayloadItem{std::move(value), span.begin, std::string(span.of(raw))};
}

std::vector<PayloadItem> items_from_array(std::string_view raw, Span span, const nlohmann::json& array) {
  std::vector<PayloadItem> items;
  const auto spans = detail::array_element_spans(raw, span);
  const std::size_t n = std::min(spans.size(), array.size());
  items.reserve(n);
  for (std::size_t i = 0; i < n; ++i) items.push_back(make_item(raw, spans[i], array[i]));
  return items;
}

bool is_wrapper_object(const nlohmann::json& object) {
  if (object.contains("question")) return false;
  return std::count_if(object.begin(), object.end(),
                       [](const nlohmann::json& v) { return v.is_array(); }) == 1;
}

std::vector<PayloadItem> items_from_value(std::string_view raw, Span span, const nlohmann::json& value) {
  if (value.is_array()) return items_from_array(raw, span, value);

  if (is_wrapper_object(value)) {
    for (const auto& [key_span, value_span] : detail::object_member_spans(raw, span)) {
      if (raw[value_span.begin] != '[') continue;
      auto inner = parse_strict(value_span.of(raw));
      if (inner.is_array()) return items_from_array(raw, value_span, inner);
    }
    return {};
  }

  std::vector<PayloadItem> items{make_item(raw, span, value)};
  // Objects emitted one after another rather than inside an array.
  std::size_t pos = span.end;
  while (true) {
    pos = detail::skip_whitespace(raw, pos);
    while (pos < raw.size() && raw[pos] == ',') pos = detail::skip_whitespace(raw, pos + 1);
    if (pos >= raw.size() || raw[pos] != '{') break;
    const auto end = detail::match_container(raw, pos);
    if (!end) break;
    const Span next{pos, *end};
    auto parsed = parse_strict(next.of(raw));
    if (!parsed.is_object()) break;
    items.push_back(make_item(raw, next, std::move(parsed)));
    pos = *end;
  }
  return items;
}

bool has_object_item(const std::vector<PayloadItem>& items) {
  return std::any_of(items.begin(), items.end(),
                     [](const PayloadItem& item) { return item.value.is_object(); });
}

bool is_string_array(const nlohmann::json& v) {
  return v.is_array() && std::all_of(v.begin(), v.end(), [](const nlohmann::json& e) { return e.is_string(); });
}

RecordRejection reject(RejectReason reason, std::string detail) {
  return RecordRejection{reason, std::move(detail)};
}

}  // namespace

std::optional<JsonPayload> extract_json_payload(std::string_view raw) {
  std::optional<JsonPayload> fallback;
  std::size_t pos = 0;
  while (true) {
    const std::size_t start = raw.find_first_of("[{", pos);
    if (start == std::string_view::npos) break;
    bool truncated = false;
    const auto end = detail::match_container(raw, start, &truncated);
    if (!end) {
      if (truncated) break;
      pos = start + 1;
      continue;
    }
    const Span span{start, *end};
    const auto parsed = parse_strict(span.of(raw));
    if (parsed.is_discarded()) {
      pos = *end;
      continue;
    }
    JsonPayload payload{items_from_value(raw, span, parsed)};
    if (has_object_item(payload.items)) return payload;
    if (!fallback && !payload.items.empty()) fallback = std::move(payload);
    pos = *end;
  }
  return fallback;
}

RecordCheck check_record(const nlohmann::json& candidate, const LabelMode& mode,
                         const FormattingExample& seed, std::optional<std::string> id) {
  if (!candidate.is_object()) return reject(RejectReason::kMalformed, "candidate is not a JSON object");

  for (const char* key : {"question", "options", "answer"}) {
    if (!candidate.contains(key)) {
      return reject(RejectReason::kSchemaViolation, std::string("missing \"") + key + "\"");
    }
  }
  const auto& question = candidate["question"];
  const auto& options = candidate["options"];
  const auto& answer = candidate["answer"];
  if (!question.is_string()) return reject(RejectReason::kSchemaViolation, "\"question\" is not a string");
  if (!is_string_array(options)) {
    return reject(RejectReason::kSchemaViolation, "\"options\" is not an array of strings");
  }
  if (!answer.is_string()) return reject(RejectReason::kSchemaViolation, "\"answer\" is not a string");

  std::optional<std::string> context;
  if (seed.context()) {
    if (!candidate.contains("context") || !candidate["context"].is_string()) {
      return reject(RejectReason::kSchemaViolation, "missing or non-string \"context\"");
    }
    context = candidate["context"].get<std::string>();
    if (normalize_text(*context).empty()) {
      return reject(RejectReason::kSchemaViolation, "\"context\" is empty");
    }
  }

  auto option_list = options.get<std::vector<std::string>>();
  auto answer_text = answer.get<std::string>();

  if (mode.is_fixed()) {
    auto got = option_list;
    auto want = seed.options();
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    // Duplicates are a schema problem, reported below; compare as sets here.
    got.erase(std::unique(got.begin(), got.end()), got.end());
    if (got != want && option_list.size() >= 2) {
      return reject(RejectReason::kOptionMismatch, "options differ from the fixed label space");
    }
  } else if (option_list.size() >= 2 && option_list.size() != seed.options().size()) {
    return reject(RejectReason::kOptionMismatch,
                  "expected " + std::to_string(seed.options().size()) + " options, got " +
                      std::to_string(option_list.size()));
  }

  try {
    return FormattingExample::create(question.get<std::string>(), std::move(option_list),
                                     std::move(answer_text), std::move(context), std::move(id));
  } catch (const Error& e) {
    const auto reason = e.code() == ErrorCode::kAnswerNotInOptions ? RejectReason::kOptionMismatch
                                                                   : RejectReason::kSchemaViolation;
    return reject(reason, e.what());
  }
}

std::string dedup_key(const FormattingExample& example) { return normalize_text(example.question()); }

bool DedupCache::insert(const std::string& key) {
  std::lock_guard lock(mu_);
  return keys_.insert(key).second;
}

bool DedupCache::contains(const std::string& key) const {
  std::lock_guard lock(mu_);
  return keys_.count(key) != 0;
}

std::size_t DedupCache::size() const {
  std::lock_guard lock(mu_);
  return keys_.size();
}

std::string generated_id(std::uint32_t iteration, std::size_t index) {
  return "g" + std::to_string(iteration) + "-" + std::to_string(index);
}

ValidationOutcome validate_completion(std::string_view raw, const LabelMode& mode,
                                      const FormattingExample& seed, DedupCache& cache,
                                      std::uint32_t iteration) {
  ValidationOutcome outcome;
  const auto payload = extract_json_payload(raw);
  if (!payload) {
    outcome.rejections.push_back(Rejection{iteration, 0, RejectReason::kMalformed,
                                           "no parseable JSON payload", std::string(raw)});
    return outcome;
  }

  for (std::size_t i = 0; i < payload->items.size(); ++i) {
    const auto& item = payload->items[i];
    auto check = check_record(item.value, mode, seed, generated_id(iteration, i));
    if (auto* rejected = std::get_if<RecordRejection>(&check)) {
      outcome.rejections.push_back(
          Rejection{iteration, item.offset, rejected->reason, std::move(rejected->detail), item.raw});
      continue;
    }
    auto& example = std::get<FormattingExample>(check);
    auto key = dedup_key(example);
    if (!cache.insert(key)) {
      outcome.rejections.push_back(Rejection{iteration, item.offset, RejectReason::kDuplicate,
                                             "duplicate question", item.raw});
      continue;
    }
    outcome.accepted.push_back(
        GeneratedRecord{std::move(example), iteration, seed.id(), std::move(key), item.offset});
  }
  return outcome;
}

}  // namespace seedforge
