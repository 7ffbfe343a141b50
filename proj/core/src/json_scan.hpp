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
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

// Byte-level scanning over JSON text. These helpers only find boundaries;
// strict parsing is always done by nlohmann::json afterwards.
namespace seedforge::detail {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the last byte

  std::size_t size() const noexcept { return end - begin; }
  std::string_view of(std::string_view text) const noexcept { return text.substr(begin, size()); }
};

std::size_t skip_whitespace(std::string_view text, std::size_t pos) noexcept;

/// `text[start]` must be '[' or '{'. Returns one past the matching closer,
/// honoring string literals and escapes, or nullopt when the text ends first
/// or a closer of the wrong kind appears. `truncated`, when given, is set to
/// whether the failure was running out of text.
std::optional<std::size_t> match_container(std::string_view text, std::size_t start,
                                           bool* truncated = nullptr) noexcept;

/// Span of the JSON value beginning at `pos` (after whitespace). Intended for
/// text already known to be valid JSON.
std::optional<Span> value_span(std::string_view text, std::size_t pos) noexcept;

/// Element spans of the array occupying `array` (which must be valid JSON).
std::vector<Span> array_element_spans(std::string_view text, Span array);

/// (key, value) spans of the object occupying `object` (valid JSON). Key
/// spans include the quotes.
std::vector<std::pair<Span, Span>> object_member_spans(std::string_view text, Span object);

}  // namespace seedforge::detail
