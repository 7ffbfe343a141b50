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

#include <string>

#include <nlohmann/json.hpp>

#include "seedforge/chat_backend.hpp"
#include "seedforge/model.hpp"

namespace seedforge {

// The system instruction and the JSON formatting example sent with every
// completion call.
struct RenderedPrompt {
  std::string system_instruction;
  std::string user_example;
  LabelMode label_mode;
};

/// The system instruction: one "- " clause per line asking for
/// `config.batch_size` examples with different content and different
/// answers, as unnumbered JSON; in fixed mode a fourth clause requires the
/// seed's options. The count is substituted verbatim ("1 examples").
std::string render_instruction(const CreationConfig& config);

/// The example as a JSON object with mode-dependent key order:
///   variable: [context], question, options, answer
///   fixed:    options, answer, [context], question
/// Two-space indentation, LF line endings, no trailing newline.
std::string render_format_prompt(const FormattingExample& example, const LabelMode& mode);

/// Same content as render_format_prompt, as an ordered JSON value.
nlohmann::ordered_json format_prompt_json(const FormattingExample& example, const LabelMode& mode);

RenderedPrompt render_prompt(const CreationConfig& config, const FormattingExample& example);

/// System message = instruction, user message = format prompt; decoding
/// parameters and model come from `config`. Throws Error(kPrecondition) if
/// either text is empty.
ChatRequest assemble_request(const std::string& instruction, const std::string& format_prompt,
                             const CreationConfig& config);

}  // namespace seedforge
