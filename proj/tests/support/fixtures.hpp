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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "seedforge/model.hpp"

namespace seedforge::testing {

inline std::filesystem::path data_dir() { return SEEDFORGE_TEST_DATA_DIR; }

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("seedforge-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline FormattingExample yes_no_seed() {
  return FormattingExample::create("Is the Pacific the largest ocean on Earth?", {"yes", "no"}, "yes",
                                   std::nullopt, "seed");
}

inline FormattingExample multiple_choice_seed() {
  return FormattingExample::create("Where would you keep a spare tire?",
                                   {"trunk", "kitchen", "attic", "garden", "bathtub"}, "trunk",
                                   std::nullopt, "seed");
}

inline nlohmann::json record(const std::string& question, const std::string& answer = "yes",
                             std::vector<std::string> options = {"yes", "no"}) {
  return {{"question", question}, {"options", std::move(options)}, {"answer", answer}};
}

// A yes/no record whose question is unique per (tag, i).
inline nlohmann::json numbered(const std::string& tag, int i) {
  return record("Question " + tag + " number " + std::to_string(i) + "?", i % 2 == 0 ? "yes" : "no");
}

inline std::string batch_text(const std::vector<nlohmann::json>& records) {
  return nlohmann::json(records).dump(2);
}

// Scripted-backend fixture entry for a reply with explicit usage.
inline nlohmann::json reply(const std::string& text, int prompt_tokens = 100, int completion_tokens = 100) {
  return {{"text", text},
          {"usage", {{"prompt_tokens", prompt_tokens}, {"completion_tokens", completion_tokens}}}};
}

inline nlohmann::json fault(const std::string& kind) { return {{"fault", kind}}; }

// Writes seed, script and config for a CLI run into `dir`; returns the
// config path. `extra` is merged into the config document.
inline std::filesystem::path write_run(const std::filesystem::path& dir, const nlohmann::json& seed,
                                       const nlohmann::json& script, const nlohmann::json& extra = {}) {
  spit(dir / "seed.json", seed.dump(2));
  spit(dir / "script.json", script.dump(2));
  nlohmann::json config = {
      {"task", {{"label_mode", "fixed"}}},
      {"seed", {{"path", "seed.json"}}},
      {"creation", {{"target_count", 10}, {"batch_size", 5}, {"strategy", "random"}, {"rng_seed", 7}}},
      {"backend",
       {{"chat_url", "script:script.json"}, {"model", "gpt-3.5-turbo"}, {"retry_initial_delay_ms", 1}}},
      {"output",
       {{"dataset_path", "out/dataset.jsonl"},
        {"report_path", "out/report.json"},
        {"rejects_path", "out/rejects.jsonl"}}}};
  if (!extra.is_null()) config.merge_patch(extra);
  spit(dir / "config.json", config.dump(2));
  return dir / "config.json";
}

}  // namespace seedforge::testing
