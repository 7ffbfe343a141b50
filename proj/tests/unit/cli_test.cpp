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

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "fixtures.hpp"
#include "seedforge/persistence.hpp"

namespace seedforge {
namespace {

using nlohmann::json;
using testing::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json seed_json() { return {{"question", "Is the Pacific the largest ocean on Earth?"}, {"options", {"yes", "no"}}, {"answer", "yes"}}; }

json clean_script(int batches) {
  json script = json::array();
  for (int b = 0; b < batches; ++b) {
    std::vector<json> recs;
    for (int i = 0; i < 5; ++i) recs.push_back(testing::numbered("cli", b * 5 + i));
    script.push_back(testing::reply(testing::batch_text(recs)));
  }
  return script;
}

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

TEST(Cli, CreateWritesAllOutputs) {
  TempDir dir;
  const auto config = testing::write_run(dir.path(), seed_json(), clean_script(2));
  const auto r = run({"create", "--config", config.string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(line_count(testing::slurp(dir / "out/dataset.jsonl")), 10u);
  const auto report = json::parse(testing::slurp(dir / "out/report.json"));
  EXPECT_EQ(report["status"], "completed");
  EXPECT_EQ(report["iterations"], 2);
  EXPECT_TRUE(std::filesystem::exists(dir / "out/rejects.jsonl"));
  EXPECT_EQ(testing::slurp(dir / "out/report.drift.csv").rfind("iteration,seed_id,mean_cosine_to_initial\n", 0), 0u);
}

TEST(Cli, CreateIsByteDeterministic) {
  TempDir a, b;
  const auto ca = testing::write_run(a.path(), seed_json(), clean_script(3));
  const auto cb = testing::write_run(b.path(), seed_json(), clean_script(3));
  ASSERT_EQ(run({"create", "--config", ca.string(), "--k", "15"}).code, 0);
  ASSERT_EQ(run({"create", "--config", cb.string(), "--k", "15"}).code, 0);
  for (const char* f : {"out/dataset.jsonl", "out/report.json", "out/rejects.jsonl", "out/report.drift.csv"}) {
    EXPECT_EQ(testing::slurp(a / f), testing::slurp(b / f)) << f;
  }
}

TEST(Cli, OverridesApply) {
  TempDir dir;
  const auto config = testing::write_run(dir.path(), seed_json(), clean_script(4),
                                         json{{"backend", {{"embed_url", "stub:3"}}}});
  const auto r = run({"create", "--config", config.string(), "--k", "12", "--strategy", "similar", "--rng-seed", "9"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = json::parse(testing::slurp(dir / "out/report.json"));
  EXPECT_EQ(report["strategy"], "similar");
  EXPECT_EQ(report["rng_seed"], 9);
  EXPECT_EQ(report["dataset_size"], 12);
}

TEST(Cli, SimilarWithoutEmbedderIsConfigErrorBeforeAnyCall) {
  TempDir dir;
  const auto config = testing::write_run(dir.path(), seed_json(), clean_script(1));
  const auto r = run({"create", "--config", config.string(), "--strategy", "similar"});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("ConfigError"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir / "out"));
}

TEST(Cli, HttpBackendWithoutKeyFailsBeforeNetwork) {
  TempDir dir;
  ::unsetenv("SEEDFORGE_API_KEY");
  const auto config = testing::write_run(dir.path(), seed_json(), clean_script(1),
                                         json{{"backend", {{"chat_url", "http://127.0.0.1:1/v1/chat/completions"}}}});
  const auto r = run({"create", "--config", config.string()});
  EXPECT_EQ(r.code, cli::kBackendFailure);
  EXPECT_NE(r.err.find("AuthError"), std::string::npos);
}

TEST(Cli, BadSeedAndUnknownStrategy) {
  TempDir dir;
  const auto config = testing::write_run(dir.path(), json{{"question", "Q?"}, {"options", {"yes"}}, {"answer", "yes"}},
                                         clean_script(1));
  EXPECT_EQ(run({"create", "--config", config.string()}).code, cli::kSeed);
  EXPECT_EQ(run({"create", "--config", config.string(), "--strategy", "diverse"}).code, cli::kUsage);
  EXPECT_EQ(run({"create"}).code, cli::kUsage);
  EXPECT_EQ(run({}).code, cli::kUsage);
}

TEST(Cli, DryRunPrintsPromptAndHonoursBudget) {
  TempDir dir;
  const auto config = testing::write_run(dir.path(), seed_json(), clean_script(1));
  const auto r = run({"create", "--config", config.string(), "--dry-run"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("same options as the provided example"), std::string::npos);
  EXPECT_NE(r.out.find("estimated_usd"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir / "out"));

  const auto capped = testing::write_run(dir.path(), seed_json(), clean_script(1),
                                         json{{"cost", {{"budget_cap", 0.0000001}}}});
  EXPECT_EQ(run({"create", "--config", capped.string(), "--dry-run"}).code, cli::kBudgetExceeded);
}

TEST(Cli, RunFailuresHaveDistinctCodes) {
  TempDir budget, attempts, backend;
  const auto cb = testing::write_run(budget.path(), seed_json(), clean_script(4), json{{"cost", {{"budget_cap", 0.0005}}}});
  EXPECT_EQ(run({"create", "--config", cb.string()}).code, cli::kBudgetExceeded);

  json useless = json::array();
  for (int i = 0; i < 30; ++i) useless.push_back(testing::reply("no json here"));
  const auto ca = testing::write_run(attempts.path(), seed_json(), useless);
  EXPECT_EQ(run({"create", "--config", ca.string()}).code, cli::kAttemptsExhausted);

  json limited = clean_script(1);
  for (int i = 0; i < 5; ++i) limited.push_back(testing::fault("rate_limited"));
  const auto cr = testing::write_run(backend.path(), seed_json(), limited);
  const auto r = run({"create", "--config", cr.string()});
  EXPECT_EQ(r.code, cli::kBackendFailure);
  EXPECT_NE(r.err.find("RateLimited"), std::string::npos);
  EXPECT_EQ(read_dataset(backend / "out/dataset.jsonl").size(), 5u);
}

TEST(Cli, StatsReportsAndAuditsDuplicates) {
  TempDir dir;
  const auto config = testing::write_run(dir.path(), seed_json(), clean_script(2));
  ASSERT_EQ(run({"create", "--config", config.string()}).code, 0);
  const auto ok = run({"stats", (dir / "out/dataset.jsonl").string(), "--json"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  const auto stats = json::parse(ok.out);
  EXPECT_EQ(stats["records"], 10);
  EXPECT_EQ(stats["duplicate_keys"], 0);
  EXPECT_EQ(stats["answer_histogram"]["yes"], 5);

  auto text = testing::slurp(dir / "out/dataset.jsonl");
  text += text.substr(0, text.find('\n') + 1);
  testing::spit(dir / "dup.jsonl", text);
  const auto dup = run({"stats", (dir / "dup.jsonl").string()});
  EXPECT_EQ(dup.code, cli::kFailure);
  EXPECT_NE(dup.out.find("duplicate keys: 1"), std::string::npos);

  testing::spit(dir / "empty.jsonl", "");
  const auto empty = run({"stats", (dir / "empty.jsonl").string()});
  EXPECT_EQ(empty.code, 0);
  EXPECT_NE(empty.out.find("records: 0"), std::string::npos);

  testing::spit(dir / "bad.jsonl", "{}\n");
  const auto bad = run({"stats", (dir / "bad.jsonl").string()});
  EXPECT_EQ(bad.code, cli::kFailure);
  EXPECT_NE(bad.err.find("line 1"), std::string::npos);
}

TEST(Cli, DriftReport) {
  TempDir with, without;
  const auto cw = testing::write_run(with.path(), seed_json(), clean_script(5),
                                     json{{"creation", {{"target_count", 25}, {"strategy", "contrastive"}}},
                                          {"backend", {{"embed_url", "stub"}}}});
  ASSERT_EQ(run({"create", "--config", cw.string()}).code, 0);
  const auto r = run({"drift-report", (with / "out/report.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(r.out), 6u);
  EXPECT_EQ(r.out, testing::slurp(with / "out/report.drift.csv"));

  const auto co = testing::write_run(without.path(), seed_json(), clean_script(2));
  ASSERT_EQ(run({"create", "--config", co.string()}).code, 0);
  const auto missing = run({"drift-report", (without / "out/report.json").string()});
  EXPECT_NE(missing.code, 0);
  EXPECT_NE(missing.err.find("MissingDriftData"), std::string::npos);
}

TEST(Cli, ValidateReplaysRecordedCompletions) {
  const auto dir = testing::data_dir() / "revalidation";
  const auto r = run({"validate", "--config", (dir / "config.json").string(), "--raw", (dir / "corpus.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(r.out), line_count(testing::slurp(dir / "expected.jsonl")));
}

}  // namespace
}  // namespace seedforge
