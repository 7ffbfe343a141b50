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
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "seedforge/chat_backend.hpp"
#include "seedforge/embedding.hpp"
#include "seedforge/model.hpp"
#include "seedforge/orchestrator.hpp"
#include "seedforge/validator.hpp"

namespace seedforge {

// ---------------------------------------------------------------------------
// Run configuration

struct BackendSettings {
  // http(s)://... for an OpenAI-compatible endpoint, or script:PATH for a
  // recorded fixture (see ScriptedBackend::parse_script).
  std::string chat_url;
  // http(s)://... or stub[:SEED] for the offline hash embedder.
  std::optional<std::string> embed_url;
  std::string model;
  std::optional<std::string> embed_model;
  std::chrono::seconds timeout{120};
  std::uint32_t retry_attempts = 5;
  std::chrono::milliseconds retry_initial_delay{1000};
};

struct OutputSettings {
  std::filesystem::path dataset_path;
  std::filesystem::path report_path;
  std::filesystem::path rejects_path;
  // Defaults to the report path with extension ".drift.csv".
  std::filesystem::path drift_path;
};

/// Parsed run configuration. Relative paths are resolved against the
/// directory of the config file.
struct RunConfigDocument {
  CreationConfig creation;
  LabelMode::Kind label_kind = LabelMode::Kind::kVariable;
  std::optional<std::vector<std::string>> fixed_options;
  std::filesystem::path seed_path;
  BackendSettings backend;
  OutputSettings output;

  /// Cross-field rules, re-checked after command-line overrides:
  /// contrastive and similar need backend.embed_url; creation values must
  /// satisfy CreationConfig::validate(). Throws Error(kConfigError).
  void validate() const;
};

/// Strict parse: unknown keys, missing required keys and mistyped values all
/// throw Error(kConfigError).
///
/// Required: task.label_mode, seed.path, creation.target_count,
/// backend.chat_url, backend.model, output.dataset_path, output.report_path,
/// output.rejects_path.
RunConfigDocument parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfigDocument load_run_config(const std::filesystem::path& path);

/// {"question", "options", "answer", "context"?}; Error(kSeedError) on any
/// problem, including FormattingExample invariant violations.
FormattingExample parse_seed(const nlohmann::json& doc);
FormattingExample load_seed(const std::filesystem::path& path);

/// The label mode a config describes for a given seed. Fixed mode uses
/// task.fixed_options when present and the seed's options otherwise.
LabelMode resolve_label_mode(const RunConfigDocument& config, const FormattingExample& seed);

/// Identifier of the initial seed in every run.
inline constexpr std::string_view kInitialSeedId = "seed";

// ---------------------------------------------------------------------------
// Backends from configuration

std::shared_ptr<ChatBackend> make_chat_backend(const BackendSettings& settings,
                                               std::uint64_t jitter_seed, Sleeper sleeper = {});
/// Null when no embed_url is configured.
std::shared_ptr<Embedder> make_embedder(const BackendSettings& settings);

// ---------------------------------------------------------------------------
// Files

std::string read_text_file(const std::filesystem::path& path);
/// Writes a temporary sibling, then renames it over `path`.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// One dataset line (no trailing newline): question, options, answer,
/// context when present, meta {id, iteration, parent_seed_id, source_offset}.
std::string dataset_line(const GeneratedRecord& record);

/// Throws Error(kParseError) naming the 1-based line on any problem.
/// Blank lines are skipped.
std::vector<GeneratedRecord> parse_dataset(std::string_view jsonl);
std::vector<GeneratedRecord> read_dataset(const std::filesystem::path& path);

/// Appends dataset lines batch by batch and flushes after each batch. The
/// file is truncated on open.
class DatasetWriter {
 public:
  explicit DatasetWriter(const std::filesystem::path& path);
  void append(std::span<const GeneratedRecord> batch);
  std::size_t written() const noexcept { return written_; }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t written_ = 0;
};

std::string rejects_jsonl(std::span<const Rejection> rejections);

/// The run report document. Contains no timestamps, so identical runs give
/// identical bytes.
nlohmann::ordered_json report_json(const RunReport& report, const CreationConfig& config);

/// Drift rows from a report document; Error(kMissingDriftData) when the run
/// had no embedder or the document holds no drift data.
std::vector<DriftRow> drift_rows_from_report(const nlohmann::json& report);

/// Header "iteration,seed_id,mean_cosine_to_initial" then one row per
/// iteration; absent values are empty fields; fields quoted per RFC 4180
/// when needed; LF line endings; shortest round-trip number formatting.
std::string drift_csv(std::span<const DriftRow> rows);

// ---------------------------------------------------------------------------
// Stats

struct DatasetStats {
  std::size_t records = 0;
  std::map<std::string, std::size_t> answer_histogram;
  std::map<std::size_t, std::size_t> option_count_histogram;
  // Records whose dedup key already appeared earlier in the file.
  std::size_t duplicate_keys = 0;
  // In Unicode code points; 0 for an empty dataset.
  double mean_question_length = 0.0;
};

DatasetStats compute_stats(std::span<const GeneratedRecord> records);
nlohmann::ordered_json stats_json(const DatasetStats& stats);
std::string stats_text(const DatasetStats& stats);

// ---------------------------------------------------------------------------
// Offline re-validation of recorded completions

struct RecordedCompletion {
  std::string id;
  std::string text;
};

/// JSONL where each line is either a JSON string (the completion text) or
/// {"id": "...", "text": "..."}. Lines without an id get their 1-based line
/// number. Error(kParseError) on a bad line.
std::vector<RecordedCompletion> parse_completion_corpus(std::string_view jsonl);

struct RevalidationDecision {
  std::string completion_id;
  std::size_t source_offset = 0;
  bool accepted = false;
  std::optional<RejectReason> reason;
};

/// Validates each completion in order against `seed`, as if each were one
/// iteration of a run. Duplicates are judged across the whole corpus, with
/// the seed pre-inserted.
std::vector<RevalidationDecision> revalidate(std::span<const RecordedCompletion> corpus,
                                             const LabelMode& mode, const FormattingExample& seed);

}  // namespace seedforge
