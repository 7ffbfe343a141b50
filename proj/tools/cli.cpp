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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>

#include "seedforge/error.hpp"
#include "seedforge/orchestrator.hpp"
#include "seedforge/persistence.hpp"
#include "seedforge/prompt.hpp"

namespace seedforge::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kInvalidLabelMode:
    case ErrorCode::kPrecondition:
      return kUsage;
    case ErrorCode::kSeedError:
      return kSeed;
    case ErrorCode::kBudgetExceeded:
      return kBudgetExceeded;
    case ErrorCode::kAttemptsExhausted:
      return kAttemptsExhausted;
    case ErrorCode::kAuthError:
    case ErrorCode::kRateLimited:
    case ErrorCode::kTransport:
    case ErrorCode::kMalformedResponse:
    case ErrorCode::kScriptExhausted:
    case ErrorCode::kEmptyText:
    case ErrorCode::kDimensionMismatch:
      return kBackendFailure;
    default:
      return kFailure;
  }
}

int exit_code_for(RunStatus status) {
  switch (status) {
    case RunStatus::kCompleted: return kOk;
    case RunStatus::kBudgetExceeded: return kBudgetExceeded;
    case RunStatus::kAttemptsExhausted: return kAttemptsExhausted;
    case RunStatus::kBackendFailure: return kBackendFailure;
  }
  return kFailure;
}

struct CreateArgs {
  std::string config;
  std::optional<std::uint32_t> k;
  std::optional<std::string> strategy;
  std::optional<std::uint64_t> rng_seed;
  bool dry_run = false;
};

int cmd_create(const CreateArgs& args, std::ostream& out, std::ostream& err) {
  RunConfigDocument config = load_run_config(args.config);
  if (args.k) config.creation.target_count = *args.k;
  if (args.strategy) {
    try {
      config.creation.strategy = parse_strategy(*args.strategy);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfigError, e.what());
    }
  }
  if (args.rng_seed) config.creation.rng_seed = *args.rng_seed;
  config.validate();

  const FormattingExample seed = load_seed(config.seed_path);
  config.creation.label_mode = resolve_label_mode(config, seed);
  const CreationConfig& creation = config.creation;

  if (args.dry_run) {
    const RenderedPrompt prompt = render_prompt(creation, seed);
    const double estimate = estimate_cost_from_prompt(creation, seed);
    out << "# system\n" << prompt.system_instruction << "\n# user\n" << prompt.user_example << '\n';
    out << "# estimate\n"
        << "target_count: " << creation.target_count << '\n'
        << "batch_size: " << creation.batch_size << '\n'
        << "strategy: " << to_string(creation.strategy) << '\n'
        << "estimated_usd: " << estimate << '\n';
    if (creation.budget_cap && estimate > *creation.budget_cap) {
      err << "error: estimated cost " << estimate << " USD exceeds budget cap " << *creation.budget_cap
          << " USD\n";
      return kBudgetExceeded;
    }
    return kOk;
  }

  const auto chat = make_chat_backend(config.backend, creation.rng_seed);
  const auto embedder = make_embedder(config.backend);

  DatasetWriter writer(config.output.dataset_path);
  RunObserver observer;
  observer.on_records = [&writer](std::span<const GeneratedRecord> batch) { writer.append(batch); };

  const RunReport report = create_dataset(creation, seed, *chat, embedder.get(), observer);

  write_text_file(config.output.report_path, report_json(report, creation).dump(2) + "\n");
  write_text_file(config.output.rejects_path, rejects_jsonl(report.rejected));
  write_text_file(config.output.drift_path, drift_csv(report.drift_rows));

  out << "status: " << to_string(report.status) << '\n'
      << "records: " << report.dataset.size() << '\n'
      << "iterations: " << report.iterations << '\n'
      << "rejections: " << report.rejections.total() << '\n'
      << "total_usd: " << report.ledger.total_usd() << (report.ledger.estimated() ? " (estimated)" : "")
      << '\n';
  if (!report.ok()) {
    err << "error: " << (report.error_code ? to_string(*report.error_code) : "") << ": "
        << report.error_message << '\n';
  }
  return exit_code_for(report.status);
}

int cmd_stats(const std::string& path, bool as_json, std::ostream& out, std::ostream& err) {
  const auto records = read_dataset(path);
  const DatasetStats stats = compute_stats(records);
  if (as_json) {
    out << stats_json(stats).dump(2) << '\n';
  } else {
    out << stats_text(stats);
  }
  if (stats.duplicate_keys > 0) {
    err << "error: " << stats.duplicate_keys << " duplicate record(s)\n";
    return kFailure;
  }
  return kOk;
}

int cmd_drift_report(const std::string& path, std::ostream& out) {
  const auto doc = json::parse(read_text_file(path), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw Error(ErrorCode::kParseError, path + " is not valid JSON");
  out << drift_csv(drift_rows_from_report(doc));
  return kOk;
}

int cmd_validate(const std::string& config_path, const std::string& raw_path, std::ostream& out,
                 std::ostream& err) {
  const RunConfigDocument config = load_run_config(config_path);
  const FormattingExample seed = load_seed(config.seed_path);
  const LabelMode mode = resolve_label_mode(config, seed);
  const auto corpus = parse_completion_corpus(read_text_file(raw_path));
  const auto decisions = revalidate(corpus, mode, seed);

  std::size_t accepted = 0;
  for (const auto& d : decisions) {
    ordered_json line;
    line["completion"] = d.completion_id;
    line["source_offset"] = d.source_offset;
    line["decision"] = d.accepted ? "accept" : "reject";
    if (d.reason) line["reason"] = to_string(*d.reason);
    out << line.dump(-1, ' ', false, ordered_json::error_handler_t::replace) << '\n';
    if (d.accepted) ++accepted;
  }
  err << corpus.size() << " completions, " << decisions.size() << " candidates: " << accepted << " accepted, "
      << decisions.size() - accepted << " rejected\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthetic dataset creation from a single formatting example", "seedforge"};
  app.require_subcommand(1);

  CreateArgs create;
  auto* create_cmd = app.add_subcommand("create", "Create a dataset from a run config");
  create_cmd->add_option("--config", create.config, "Run config (JSON)")->required();
  create_cmd->add_option("--k", create.k, "Override creation.target_count");
  create_cmd->add_option("--strategy", create.strategy, "random, contrastive, similar or tree");
  create_cmd->add_option("--rng-seed", create.rng_seed, "Override creation.rng_seed");
  create_cmd->add_flag("--dry-run", create.dry_run, "Print the prompt and a cost estimate; make no calls");

  std::string stats_path;
  bool stats_json_flag = false;
  auto* stats_cmd = app.add_subcommand("stats", "Summarize a dataset file");
  stats_cmd->add_option("path", stats_path, "Dataset (JSONL)")->required();
  stats_cmd->add_flag("--json", stats_json_flag, "Emit JSON instead of text");

  std::string report_path;
  auto* drift_cmd = app.add_subcommand("drift-report", "Print a run's drift rows as CSV");
  drift_cmd->add_option("path", report_path, "Run report (JSON)")->required();

  std::string validate_config;
  std::string raw_path;
  auto* validate_cmd = app.add_subcommand("validate", "Re-validate recorded completions offline");
  validate_cmd->add_option("--config", validate_config, "Run config (JSON)")->required();
  validate_cmd->add_option("--raw", raw_path, "Recorded completions (JSONL)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (create_cmd->parsed()) return cmd_create(create, out, err);
    if (stats_cmd->parsed()) return cmd_stats(stats_path, stats_json_flag, out, err);
    if (drift_cmd->parsed()) return cmd_drift_report(report_path, out);
    if (validate_cmd->parsed()) return cmd_validate(validate_config, raw_path, out, err);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace seedforge::cli
