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
#include <string>
#include <string_view>

namespace seedforge {

// Canonical form used for duplicate detection and option comparison:
// Unicode NFC, full lowercase mapping, runs of Unicode whitespace collapsed
// to one ASCII space, leading and trailing whitespace removed.
// Input must be UTF-8; ill-formed sequences are replaced with U+FFFD.
std::string normalize_text(std::string_view utf8);

// Number of Unicode scalar values in a UTF-8 string (continuation bytes are
// not counted).
std::size_t count_code_points(std::string_view utf8) noexcept;

}  // namespace seedforge
