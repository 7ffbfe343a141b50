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

#include "json_scan.hpp"

namespace seedforge::detail {
namespace {

bool is_ws(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

// `text[start]` is '"'. Returns one past the closing quote.
std::optional<std::size_t> string_end(std::string_view text, std::size_t start) noexcept {
  for (std::size_t i = start + 1; i < text.size(); ++i) {
    if (text[i] == '\\') {
      ++i;
    } else if (text[i] == '"') {
      return i + 1;
    }
  }
  return std::nullopt;
}

}  // namespace

std::size_t skip_whitespace(std::string_view text, std::size_t pos) noexcept {
  while (pos < text.size() && is_ws(text[pos])) ++pos;
  return pos;
}

std::optional<std::size_t> match_container(std::string_view text, std::size_t start,
                                           bool* truncated) noexcept {
  if (truncated != nullptr) *truncated = false;
  if (start >= text.size() || (text[start] != '[' && text[start] != '{')) return std::nullopt;
  std::vector<char> closers;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '"') {
      const auto end = string_end(text, i);
      if (!end) break;
      i = *end - 1;
    } else if (c == '[') {
      closers.push_back(']');
    } else if (c == '{') {
      closers.push_back('}');
    } else if (c == ']' || c == '}') {
      if (closers.empty() || closers.back() != c) return std::nullopt;
      closers.pop_back();
      if (closers.empty()) return i + 1;
    }
  }
  if (truncated != nullptr) *truncated = true;
  return std::nullopt;
}

std::optional<Span> value_span(std::string_view text, std::size_t pos) noexcept {
  pos = skip_whitespace(text, pos);
  if (pos >= text.size()) return std::nullopt;
  const char c = text[pos];
  if (c == '"') {
    const auto end = string_end(text, pos);
    if (!end) return std::nullopt;
    return Span{pos, *end};
  }
  if (c == '[' || c == '{') {
    const auto end = match_container(text, pos);
    if (!end) return std::nullopt;
    return Span{pos, *end};
  }
  std::size_t end = pos;
  while (end < text.size() && !is_ws(text[end]) && text[end] != ',' && text[end] != ']' &&
         text[end] != '}') {
    ++end;
  }
  if (end == pos) return std::nullopt;
  return Span{pos, end};
}

std::vector<Span> array_element_spans(std::string_view text, Span array) {
  std::vector<Span> out;
  std::size_t pos = skip_whitespace(text, array.begin + 1);
  const std::size_t close = array.end - 1;
  while (pos < close) {
    const auto value = value_span(text, pos);
    if (!value || value->end > close) break;
    out.push_back(*value);
    pos = skip_whitespace(text, value->end);
    if (pos < close && text[pos] == ',') pos = skip_whitespace(text, pos + 1);
  }
  return out;
}

std::vector<std::pair<Span, Span>> object_member_spans(std::string_view text, Span object) {
  std::vector<std::pair<Span, Span>> out;
  std::size_t pos = skip_whitespace(text, object.begin + 1);
  const std::size_t close = object.end - 1;
  while (pos < close) {
    const auto key = value_span(text, pos);
    if (!key || text[key->begin] != '"') break;
    pos = skip_whitespace(text, key->end);
    if (pos >= close || text[pos] != ':') break;
    const auto value = value_span(text, pos + 1);
    if (!value || value->end > close) break;
    out.emplace_back(*key, *value);
    pos = skip_whitespace(text, value->end);
    if (pos < close && text[pos] == ',') pos = skip_whitespace(text, pos + 1);
  }
  return out;
}

}  // namespace seedforge::detail
