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

#include "seedforge/prompt.hpp"

#include "seedforge/error.hpp"

namespace seedforge {

std::string render_instruction(const CreationConfig& config) {
  std::string out;
  out += "- You are creating " + std::to_string(config.batch_size) +
         " examples that follow the format of the example provided, but with a different content.\n";
  out += "- The created examples **must** all have different answers.\n";
  out += "- The output **must** be in unnumbered JSON format.";
  if (config.label_mode.is_fixed()) {
    out += "\n- The created examples **must** have the same options as the provided example.";
  }
  return out;
}

nlohmann::ordered_json format_prompt_json(const FormattingExample& example, const LabelMode& mode) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  if (mode.is_fixed()) {
    // Fixed mode: options, answer, context, question.
    doc["options"] = example.options();
    doc["answer"] = example.answer();
    if (example.context()) doc["context"] = *example.context();
    doc["question"] = example.question();
  } else {
    if (example.context()) doc["context"] = *example.context();
    doc["question"] = example.question();
    doc["options"] = example.options();
    doc["answer"] = example.answer();
  }
  return doc;
}

std::string render_format_prompt(const FormattingExample& example, const LabelMode& mode) {
  return format_prompt_json(example, mode).dump(2, ' ', /*ensure_ascii=*/false,
                                                nlohmann::ordered_json::error_handler_t::replace);
}

RenderedPrompt render_prompt(const CreationConfig& config, const FormattingExample& example) {
  return RenderedPrompt{render_instruction(config),
                        render_format_prompt(example, config.label_mode), config.label_mode};
}

ChatRequest assemble_request(const std::string& instruction, const std::string& format_prompt,
                             const CreationConfig& config) {
  if (instruction.empty()) throw Error(ErrorCode::kPrecondition, "instruction is empty");
  if (format_prompt.empty()) throw Error(ErrorCode::kPrecondition, "format prompt is empty");
  ChatRequest request;
  request.messages.push_back({Role::kSystem, instruction});
  request.messages.push_back({Role::kUser, format_prompt});
  request.temperature = config.temperature;
  request.top_p = config.top_p;
  request.model_name = config.model_name;
  request.max_tokens = config.max_tokens;
  return request;
}

}  // namespace seedforge
