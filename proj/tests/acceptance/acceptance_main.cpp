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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Runs offline against scripted backends.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "seedforge/error.hpp"
#include "seedforge/orchestrator.hpp"
#include "seedforge/persistence.hpp"
#include "seedforge/prompt.hpp"
#include "seedforge/sampler.hpp"

namespace {

using namespace seedforge;
using nlohmann::json;
using testing::TempDir;

// Collects the first failed expectation of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failure_.empty()) failure_ = what;
  }
  bool ok() const { return failure_.empty(); }
  const std::string& failure() const { return failure_; }

 private:
  std::string failure_;
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json seed_json() {
  return {{"question", "Is the Pacific the largest ocean on Earth?"}, {"options", {"yes", "no"}}, {"answer", "yes"}};
}

json five_per_batch(int batches, const std::string& tag) {
  json script = json::array();
  for (int b = 0; b < batches; ++b) {
    std::vector<json> recs;
    for (int i = 0; i < 5; ++i) recs.push_back(testing::numbered(tag, b * 5 + i));
    script.push_back(testing::reply(testing::batch_text(recs)));
  }
  return script;
}

std::vector<ScriptEntry> to_entries(const json& script) { return ScriptedBackend::parse_script(script); }

CreationConfig fixed_config(std::uint32_t k) {
  CreationConfig c;
  c.target_count = k;
  c.label_mode = LabelMode::fixed({"yes", "no"});
  c.rng_seed = 42;
  return c;
}

// 1. End-to-end simulated creation.
void criterion_1(Check& c) {
  ScriptedBackend chat(to_entries(five_per_batch(5, "e2e")));
  const auto start = std::chrono::steady_clock::now();
  const auto report = create_dataset(fixed_config(25), testing::yes_no_seed(), chat, nullptr);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  c.expect(report.ok(), "run did not complete: " + report.error_message);
  c.expect(report.dataset.size() == 25, "dataset size " + std::to_string(report.dataset.size()));
  c.expect(report.rejections.total() == 0, "rejections present");
  c.expect(report.iterations == 5, "iterations " + std::to_string(report.iterations));
  c.expect(elapsed < std::chrono::seconds(1), "run took longer than 1 s");

  TempDir a, b;
  const json extra = {{"creation", {{"target_count", 25}}}};
  const auto ca = testing::write_run(a.path(), seed_json(), five_per_batch(5, "e2e"), extra);
  const auto cb = testing::write_run(b.path(), seed_json(), five_per_batch(5, "e2e"), extra);
  c.expect(cli_run({"create", "--config", ca.string()}).code == 0, "first CLI run failed");
  c.expect(cli_run({"create", "--config", cb.string()}).code == 0, "second CLI run failed");
  for (const char* f : {"out/dataset.jsonl", "out/report.json", "out/rejects.jsonl", "out/report.drift.csv"}) {
    c.expect(testing::slurp(a / f) == testing::slurp(b / f), std::string(f) + " differs between runs");
  }
  c.expect(read_dataset(a / "out/dataset.jsonl").size() == 25, "dataset file does not hold 25 records");
}

// 2. Duplicate and malformed fragments are rejected and accounted for.
void criterion_2(Check& c) {
  json script = json::array();
  int next = 0;
  for (int b = 0; b < 8; ++b) {
    std::vector<json> recs;
    for (int i = 0; i < 3; ++i) recs.push_back(testing::numbered("dm", next++));
    recs.push_back(testing::numbered("dm", std::max(0, next - 4)));  // repeats an earlier question
    recs.push_back(json("{\"question\": \"half a record"));          // not a record object
    script.push_back(testing::reply(testing::batch_text(recs)));
  }
  TempDir dir;
  const auto config = testing::write_run(dir.path(), seed_json(), script, json{{"creation", {{"target_count", 15}}}});
  const auto run = cli_run({"create", "--config", config.string()});
  c.expect(run.code == 0, "create failed: " + run.err);
  const auto records = read_dataset(dir / "out/dataset.jsonl");
  c.expect(records.size() == 15, "dataset size " + std::to_string(records.size()));
  std::set<std::string> keys;
  for (const auto& r : records) keys.insert(dedup_key(r.example));
  c.expect(keys.size() == records.size(), "duplicate records in dataset");

  const auto report = json::parse(testing::slurp(dir / "out/report.json"));
  const auto accepted = report["accepted"].get<std::uint64_t>();
  const auto rejected = report["rejections"]["total"].get<std::uint64_t>();
  c.expect(accepted + rejected == report["candidates"].get<std::uint64_t>(), "accepted + rejected != parsed");
  c.expect(report["rejections"]["duplicate"] == 5 && report["rejections"]["malformed"] == 5,
           "expected 5 duplicate and 5 malformed rejections, got " + report["rejections"].dump());
  c.expect(testing::slurp(dir / "out/rejects.jsonl").find("half a record") != std::string::npos,
           "rejects file lacks the raw fragment");

  const auto stats = cli_run({"stats", (dir / "out/dataset.jsonl").string(), "--json"});
  c.expect(stats.code == 0, "stats exited " + std::to_string(stats.code));
  c.expect(stats.code == 0 && json::parse(stats.out)["duplicate_keys"] == 0, "stats reports duplicates");
}

// 3. Fixed-mode conformance under adversarial candidates.
void criterion_3(Check& c) {
  const auto seed = testing::yes_no_seed();
  const auto mode = LabelMode::fixed({"yes", "no"});
  struct Case {
    json candidate;
    std::optional<RejectReason> expected;
  };
  json missing_answer = {{"question", "Is salt sweet?"}, {"options", {"yes", "no"}}};
  const std::vector<Case> cases{
      {testing::record("Is snow white?", "yes", {"yes", "no", "maybe"}), RejectReason::kOptionMismatch},
      {testing::record("Is coal white?", "no", {"no", "yes"}), std::nullopt},
      {missing_answer, RejectReason::kSchemaViolation},
  };
  for (const auto& [candidate, expected] : cases) {
    DedupCache cache;
    const auto out = validate_completion(testing::batch_text({candidate}), mode, seed, cache, 1);
    if (expected) {
      c.expect(out.accepted.empty() && out.rejections.size() == 1 && out.rejections[0].reason == *expected,
               "wrong outcome for " + candidate.dump());
    } else {
      c.expect(out.accepted.size() == 1, "reordered options rejected: " + candidate.dump());
    }
  }

  // Whole runs over randomized adversarial batches.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> kind(0, 3);
  std::vector<ScriptEntry> script;
  for (int b = 0; b < 40; ++b) {
    std::vector<json> recs;
    for (int i = 0; i < 5; ++i) {
      const std::string q = "Adversarial " + std::to_string(b) + "-" + std::to_string(i) + "?";
      switch (kind(rng)) {
        case 0: recs.push_back(testing::record(q, "yes", {"yes", "no", "maybe"})); break;
        case 1: recs.push_back(testing::record(q, "no", {"no", "yes"})); break;
        case 2: recs.push_back(json{{"question", q}, {"options", {"yes", "no"}}}); break;
        default: recs.push_back(testing::record(q, "yes")); break;
      }
    }
    script.push_back(ScriptedReply{testing::batch_text(recs), TokenUsage{10, 10, false}});
  }
  ScriptedBackend chat(std::move(script));
  auto config = fixed_config(30);
  config.max_attempts = 40;
  const auto report = create_dataset(config, seed, chat, nullptr);
  c.expect(report.ok(), "adversarial run did not complete: " + report.error_message);
  for (const auto& r : report.dataset) {
    auto opts = r.example.options();
    std::sort(opts.begin(), opts.end());
    c.expect(opts == std::vector<std::string>{"no", "yes"}, "accepted record with foreign options");
  }
  c.expect(report.rejections.option_mismatch > 0 && report.rejections.schema_violation > 0,
           "adversarial cases were not exercised");
}

std::string golden(const std::string& name) {
  std::string text = testing::slurp(testing::data_dir() / "golden" / name);
  if (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

// 4. Prompt golden files.
void criterion_4(Check& c) {
  CreationConfig variable;
  CreationConfig fixed;
  fixed.label_mode = LabelMode::fixed({"yes", "no"});
  c.expect(render_instruction(variable) == golden("instruction_variable_5.txt"), "variable instruction differs");
  c.expect(render_instruction(fixed) == golden("instruction_fixed_5.txt"), "fixed instruction differs");
  c.expect(render_instruction(variable).find("same options") == std::string::npos,
           "fixed-only clause present in variable mode");
  c.expect(render_format_prompt(testing::multiple_choice_seed(), LabelMode::variable()) ==
               golden("format_variable.json"),
           "variable format prompt differs");
  const auto tomato = FormattingExample::create("Is a tomato a vegetable in botany?", {"yes", "no"}, "no");
  c.expect(render_format_prompt(tomato, fixed.label_mode) == golden("format_fixed.json"), "fixed format prompt differs");
  const auto cats = FormattingExample::create("Do persian cats have long hair?", {"yes", "no"}, "yes",
                                              "Persian cats are a long-haired breed with a round face.");
  c.expect(render_format_prompt(cats, fixed.label_mode) == golden("format_fixed_context.json"),
           "fixed format prompt with context differs");
}

// 5. Sampler against brute-force and breadth-first oracles.
void criterion_5(Check& c) {
  std::mt19937_64 rng(5150);
  auto rec = [](const std::string& q, const std::string& id) {
    return GeneratedRecord{FormattingExample::create(q, {"yes", "no"}, "yes", std::nullopt, id), 1, "seed", q, 0};
  };
  for (int trial = 0; trial < 1000 && c.ok(); ++trial) {
    StubEmbedder embedder(rng());
    const auto current =
        FormattingExample::create("Anchor " + std::to_string(rng() % 100) + "?", {"yes", "no"}, "yes");
    std::vector<GeneratedRecord> batch;
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) batch.push_back(rec("Pool " + std::to_string(rng() % 5) + "?", std::to_string(i)));
    const auto anchor = embedder.embed(current.question());
    std::vector<long double> scores;
    for (const auto& r : batch) scores.push_back(oracle::cosine(anchor.values(), embedder.embed(r.example.question()).values()));
    SeedSampler contrastive(Strategy::kContrastive, current, 0);
    SeedSampler similar(Strategy::kSimilar, current, 0);
    c.expect(contrastive.advance(batch, &embedder).id() == std::to_string(oracle::argmin(scores)),
             "contrastive differs from argmin in trial " + std::to_string(trial));
    c.expect(similar.advance(batch, &embedder).id() == std::to_string(oracle::argmax(scores)),
             "similar differs from argmax in trial " + std::to_string(trial));
  }
  for (int trial = 0; trial < 100 && c.ok(); ++trial) {
    const std::size_t n = 1 + rng() % 80;
    std::vector<std::vector<std::size_t>> children(n);
    for (std::size_t i = 1; i < n; ++i) children[rng() % i].push_back(i);
    SeedSampler sampler(Strategy::kTree, rec("Node 0?", "0").example, 0);
    std::vector<std::size_t> order{0};
    while (true) {
      std::vector<GeneratedRecord> batch;
      for (std::size_t ch : children[std::stoul(sampler.current().id())]) {
        batch.push_back(rec("Node " + std::to_string(ch) + "?", std::to_string(ch)));
      }
      try {
        order.push_back(std::stoul(sampler.advance(batch).id()));
      } catch (const Error&) {
        break;
      }
    }
    c.expect(order == oracle::bfs_order(children), "tree order differs from BFS in trial " + std::to_string(trial));
  }
}

// 6. Cosine correctness.
void criterion_6(Check& c) {
  const std::vector<double> x{1, 0}, y{0, 1}, d{1, 1}, w{0.3, -2.5, 4};
  c.expect(std::abs(cosine(w, w) - 1.0) <= 1e-9, "self-similarity");
  c.expect(std::abs(cosine(x, y)) <= 1e-9, "orthogonal");
  c.expect(std::abs(cosine(x, d) - 0.70710678) <= 1e-8, "45 degrees");
  std::mt19937_64 rng(66);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 100'000 && c.ok(); ++i) {
    std::vector<double> a(16), b(16);
    for (auto& v : a) v = gauss(rng);
    for (auto& v : b) v = gauss(rng);
    const auto u = EmbeddingVector::normalized(a);
    const auto v = EmbeddingVector::normalized(b);
    const double uv = cosine(u, v);
    c.expect(uv == cosine(v, u), "asymmetric cosine");
    c.expect(uv >= -1.0 && uv <= 1.0, "cosine out of range");
    c.expect(std::abs(uv - static_cast<double>(oracle::cosine(u.values(), v.values()))) <= 1e-12,
             "cosine differs from oracle");
  }
}

// 7. Cost ledger and budget enforcement.
void criterion_7(Check& c) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> tokens(1, 3000);
  std::vector<ScriptEntry> script;
  std::int64_t total = 0;
  for (int b = 0; b < 6; ++b) {
    const int p = tokens(rng), q = tokens(rng);
    total += p + q;
    std::vector<json> recs;
    for (int i = 0; i < 5; ++i) recs.push_back(testing::numbered("cost", b * 5 + i));
    script.push_back(ScriptedReply{testing::batch_text(recs), TokenUsage{p, q, false}});
  }
  ScriptedBackend chat(std::move(script));
  const auto report = create_dataset(fixed_config(30), testing::yes_no_seed(), chat, nullptr);
  c.expect(report.ledger.total_tokens() == total, "token total mismatch");
  c.expect(std::abs(report.ledger.total_usd() - static_cast<double>(oracle::usd_for_tokens(total, 0.002L))) <= 1e-9,
           "total_usd differs from tokens/1000 * 0.002");

  CostLedger ten_k;
  ten_k.add_usage(7000, 3000, 0.002);
  c.expect(std::abs(ten_k.total_usd() - 0.02) <= 1e-9, "10,000 tokens should cost 0.02 USD");

  // Reference per-dataset costs (USD) for the four strategies.
  const std::vector<double> reference_costs{3.60, 2.82, 3.62, 3.97, 0.02, 0.02, 0.03, 0.02, 2.73, 2.71, 2.77, 1.73,
                                      0.95, 0.95, 1.00, 1.05, 5.13, 2.24, 4.95, 4.2,  0.17, 0.15, 0.17, 0.17,
                                      0.24, 0.23, 0.33, 0.22, 3.13, 4.10, 3.22, 3.11, 0.66, 0.70, 0.81, 0.66,
                                      3.24, 3.20, 4.14, 3.50};
  c.expect(*std::max_element(reference_costs.begin(), reference_costs.end()) <= 5.13, "a reference cost exceeds 5.13");
  c.expect(std::abs(ten_k.total_usd() - reference_costs[4]) <= 1e-9, "10,000-token cost does not match the 0.02 cell");

  // Spend never passes the cap unless the run reports BudgetExceeded.
  std::uniform_real_distribution<double> cap(0.0, 0.05);
  for (int trial = 0; trial < 200 && c.ok(); ++trial) {
    std::vector<ScriptEntry> entries;
    for (int b = 0; b < 40; ++b) {
      std::vector<json> recs;
      for (int i = 0; i < 5; ++i) recs.push_back(testing::numbered("cap" + std::to_string(trial), b * 5 + i));
      entries.push_back(ScriptedReply{testing::batch_text(recs), TokenUsage{tokens(rng), tokens(rng), false}});
    }
    ScriptedBackend backend(std::move(entries));
    auto config = fixed_config(200);
    config.budget_cap = cap(rng);
    const auto r = create_dataset(config, testing::yes_no_seed(), backend, nullptr);
    const bool over = r.ledger.total() > Usd::from_dollars(*config.budget_cap);
    c.expect(!over || r.status == RunStatus::kBudgetExceeded, "spend passed the cap without BudgetExceeded");
    c.expect(r.status == RunStatus::kBudgetExceeded || r.ok(), "unexpected run status");
  }

  TempDir dir;
  const auto capped = testing::write_run(dir.path(), seed_json(), five_per_batch(1, "dry"),
                                         json{{"creation", {{"target_count", 100000}}}, {"cost", {{"budget_cap", 0.01}}}});
  c.expect(cli_run({"create", "--config", capped.string(), "--dry-run"}).code == cli::kBudgetExceeded,
           "dry-run estimate above cap did not raise BudgetExceeded");
}

// 8. Backend resilience.
void criterion_8(Check& c) {
  const json ok_batch = five_per_batch(1, "resilient")[0];
  auto inner = std::make_shared<ScriptedBackend>(
      to_entries(json::array({testing::fault("rate_limited"), testing::fault("rate_limited"), ok_batch})));
  std::vector<std::chrono::milliseconds> delays;
  RetryingBackend chat(inner, RetryPolicy{}, 8, [&](std::chrono::milliseconds d) { delays.push_back(d); });
  const auto report = create_dataset(fixed_config(5), testing::yes_no_seed(), chat, nullptr);
  c.expect(report.ok() && report.dataset.size() == 5, "fault plan [429, 429, ok] did not succeed");
  c.expect(delays.size() == 2, "expected two backoff delays, saw " + std::to_string(delays.size()));
  if (delays.size() == 2) {
    c.expect(delays[0] >= std::chrono::milliseconds(800) && delays[0] <= std::chrono::milliseconds(1200),
             "first delay outside 1 s +/- 20%");
    c.expect(delays[1] >= std::chrono::milliseconds(1600) && delays[1] <= std::chrono::milliseconds(2400),
             "second delay outside 2 s +/- 20%");
  }

  json plan = five_per_batch(2, "partial");
  for (int i = 0; i < 5; ++i) plan.push_back(testing::fault("rate_limited"));
  TempDir dir;
  const auto config = testing::write_run(dir.path(), seed_json(), plan, json{{"creation", {{"target_count", 20}}}});
  const auto run = cli_run({"create", "--config", config.string()});
  c.expect(run.code == cli::kBackendFailure, "exit code " + std::to_string(run.code));
  c.expect(run.err.find("RateLimited") != std::string::npos, "RateLimited not surfaced");
  const std::string text = testing::slurp(dir / "out/dataset.jsonl");
  c.expect(!text.empty() && text.back() == '\n', "partial dataset does not end on a line boundary");
  try {
    c.expect(parse_dataset(text).size() == 10, "partial dataset does not hold the 10 accepted records");
  } catch (const Error& e) {
    c.expect(false, std::string("partial dataset is not valid JSONL: ") + e.what());
  }
  const auto report_doc = json::parse(testing::slurp(dir / "out/report.json"));
  c.expect(report_doc["error"]["code"] == "RateLimited", "report lacks the RateLimited error");
}

// 9. Offline re-validation against hand labels.
void criterion_9(Check& c) {
  const auto dir = testing::data_dir() / "revalidation";
  const auto run = cli_run({"validate", "--config", (dir / "config.json").string(), "--raw", (dir / "corpus.jsonl").string()});
  c.expect(run.code == 0, "validate exited " + std::to_string(run.code) + ": " + run.err);
  std::vector<json> got, want;
  std::istringstream out(run.out), expected(testing::slurp(dir / "expected.jsonl"));
  for (std::string line; std::getline(out, line);) {
    auto d = json::parse(line);
    d.erase("source_offset");
    got.push_back(d);
  }
  for (std::string line; std::getline(expected, line);) want.push_back(json::parse(line));
  std::set<std::string> completions;
  for (const auto& w : want) completions.insert(w["completion"].get<std::string>());
  c.expect(completions.size() == 20, "corpus should hold 20 completions");
  c.expect(got.size() == want.size(), std::to_string(got.size()) + " decisions, expected " + std::to_string(want.size()));
  for (std::size_t i = 0; i < std::min(got.size(), want.size()); ++i) {
    c.expect(got[i] == want[i], "decision " + std::to_string(i) + ": got " + got[i].dump() + ", want " + want[i].dump());
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"end-to-end simulated creation", criterion_1},
      {"duplicate and malformed rejection", criterion_2},
      {"fixed-mode conformance", criterion_3},
      {"prompt golden files", criterion_4},
      {"sampler oracle equivalence", criterion_5},
      {"cosine correctness", criterion_6},
      {"cost ledger and budget", criterion_7},
      {"backend resilience", criterion_8},
      {"offline re-validation", criterion_9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    try {
      criteria[i].second(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("unexpected exception: ") + e.what());
    }
    std::cout << "criterion " << i + 1 << " [" << criteria[i].first << "]: " << (check.ok() ? "PASS" : "FAIL");
    if (!check.ok()) {
      std::cout << " (" << check.failure() << ")";
      ++failures;
    }
    std::cout << '\n';
  }
  return failures == 0 ? 0 : 1;
}
