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

#include "seedforge/persistence.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>
#include <sstream>
#include <unordered_set>

#include "seedforge/error.hpp"
#include "seedforge/text.hpp"

namespace seedforge {
namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::kConfigError, message);
}

// One config section: rejects unknown keys and type-checks reads.
class Section {
 public:
  Section(const json& parent, const std::string& name, bool required,
          std::initializer_list<std::string_view> allowed)
      : name_(name) {
    const auto it = parent.find(name);
    if (it == parent.end()) {
      if (required) config_error("missing section \"" + name + "\"");
      return;
    }
    if (!it->is_object()) config_error("\"" + name + "\" must be an object");
    node_ = &*it;
    for (const auto& [key, value] : node_->items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        config_error("unknown key \"" + name + "." + key + "\"");
      }
    }
  }

  const json* find(const std::string& key) const {
    if (node_ == nullptr) return nullptr;
    const auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  std::optional<std::string> string(const std::string& key, bool required = false) const {
    const json* v = find(key);
    if (v == nullptr) {
      if (required) missing(key);
      return std::nullopt;
    }
    if (!v->is_string()) type_error(key, "a string");
    return v->get<std::string>();
  }

  std::optional<std::uint64_t> unsigned_int(const std::string& key, bool required = false) const {
    const json* v = find(key);
    if (v == nullptr) {
      if (required) missing(key);
      return std::nullopt;
    }
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      type_error(key, "a non-negative integer");
    }
    return v->get<std::uint64_t>();
  }

  std::optional<std::uint32_t> uint32(const std::string& key, bool required = false) const {
    const auto v = unsigned_int(key, required);
    if (v && *v > 0xFFFFFFFFull) type_error(key, "an integer below 2^32");
    return v ? std::optional<std::uint32_t>(static_cast<std::uint32_t>(*v)) : std::nullopt;
  }

  std::optional<double> number(const std::string& key) const {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) type_error(key, "a number");
    return v->get<double>();
  }

  std::optional<std::vector<std::string>> string_list(const std::string& key) const {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_array() ||
        !std::all_of(v->begin(), v->end(), [](const json& e) { return e.is_string(); })) {
      type_error(key, "an array of strings");
    }
    return v->get<std::vector<std::string>>();
  }

 private:
  [[noreturn]] void missing(const std::string& key) const {
    config_error("missing required key \"" + name_ + "." + key + "\"");
  }
  [[noreturn]] void type_error(const std::string& key, const char* what) const {
    config_error("\"" + name_ + "." + key + "\" must be " + what);
  }

  std::string name_;
  const json* node_ = nullptr;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(v);
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

ordered_json record_json(const GeneratedRecord& record) {
  const auto& ex = record.example;
  ordered_json doc;
  doc["question"] = ex.question();
  doc["options"] = ex.options();
  doc["answer"] = ex.answer();
  if (ex.context()) doc["context"] = *ex.context();
  doc["meta"] = ordered_json{{"id", ex.id()},
                             {"iteration", record.iteration},
                             {"parent_seed_id", record.parent_seed_id},
                             {"source_offset", record.source_offset}};
  return doc;
}

std::string dump_line(const ordered_json& doc) {
  return doc.dump(-1, ' ', /*ensure_ascii=*/false, ordered_json::error_handler_t::replace);
}

GeneratedRecord parse_record_line(const json& doc) {
  if (!doc.is_object()) throw std::runtime_error("record is not an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "question" && key != "options" && key != "answer" && key != "context" && key != "meta") {
      throw std::runtime_error("unknown key \"" + key + "\"");
    }
  }
  const auto& meta = doc.at("meta");
  if (!meta.is_object()) throw std::runtime_error("\"meta\" is not an object");
  std::optional<std::string> id;
  if (meta.contains("id")) id = meta.at("id").get<std::string>();
  std::optional<std::string> context;
  if (doc.contains("context")) context = doc.at("context").get<std::string>();

  GeneratedRecord record{
      FormattingExample::create(doc.at("question").get<std::string>(),
                                doc.at("options").get<std::vector<std::string>>(),
                                doc.at("answer").get<std::string>(), std::move(context), std::move(id)),
      meta.at("iteration").get<std::uint32_t>(), meta.at("parent_seed_id").get<std::string>(), "",
      meta.value("source_offset", std::size_t{0})};
  record.dedup_key = dedup_key(record.example);
  return record;
}

}  // namespace

// ---------------------------------------------------------------------------

void RunConfigDocument::validate() const {
  try {
    creation.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }
  const bool needs_embedder =
      creation.strategy == Strategy::kContrastive || creation.strategy == Strategy::kSimilar;
  if (needs_embedder && !backend.embed_url) {
    config_error(std::string(to_string(creation.strategy)) + " strategy requires backend.embed_url");
  }
  if (backend.embed_url && !starts_with(*backend.embed_url, "stub") && !backend.embed_model) {
    config_error("backend.embed_url over HTTP requires backend.embed_model");
  }
  if (label_kind == LabelMode::Kind::kVariable && fixed_options) {
    config_error("task.fixed_options is only valid with label_mode \"fixed\"");
  }
}

RunConfigDocument parse_run_config(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) config_error("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    static const std::set<std::string> kSections{"task", "seed", "creation", "decoding",
                                                 "backend", "cost", "output"};
    if (!kSections.count(key)) config_error("unknown key \"" + key + "\"");
  }

  RunConfigDocument cfg;

  const Section task(doc, "task", true, {"label_mode", "fixed_options"});
  const auto mode = *task.string("label_mode", true);
  if (mode == "variable") {
    cfg.label_kind = LabelMode::Kind::kVariable;
  } else if (mode == "fixed") {
    cfg.label_kind = LabelMode::Kind::kFixed;
  } else {
    config_error("task.label_mode must be \"variable\" or \"fixed\"");
  }
  cfg.fixed_options = task.string_list("fixed_options");

  const Section seed(doc, "seed", true, {"path"});
  cfg.seed_path = resolve(base_dir, *seed.string("path", true));

  const Section creation(doc, "creation", true,
                         {"target_count", "batch_size", "strategy", "rng_seed", "max_attempts",
                          "max_in_flight"});
  auto& c = cfg.creation;
  c.target_count = *creation.uint32("target_count", true);
  if (auto v = creation.uint32("batch_size")) c.batch_size = *v;
  if (auto v = creation.string("strategy")) {
    try {
      c.strategy = parse_strategy(*v);
    } catch (const Error& e) {
      config_error(e.what());
    }
  }
  if (auto v = creation.unsigned_int("rng_seed")) c.rng_seed = *v;
  c.max_attempts = creation.uint32("max_attempts");
  if (auto v = creation.uint32("max_in_flight")) c.max_in_flight = *v;

  const Section decoding(doc, "decoding", false, {"temperature", "top_p", "max_tokens"});
  if (auto v = decoding.number("temperature")) c.temperature = *v;
  if (auto v = decoding.number("top_p")) c.top_p = *v;
  c.max_tokens = decoding.uint32("max_tokens");

  const Section backend(doc, "backend", true,
                        {"chat_url", "embed_url", "model", "embed_model", "timeout_seconds",
                         "retry_attempts", "retry_initial_delay_ms"});
  auto& b = cfg.backend;
  b.chat_url = *backend.string("chat_url", true);
  if (starts_with(b.chat_url, "script:")) {
    b.chat_url = "script:" + resolve(base_dir, b.chat_url.substr(7)).string();
  } else if (!starts_with(b.chat_url, "http://") && !starts_with(b.chat_url, "https://")) {
    config_error("backend.chat_url must be http(s)://... or script:PATH");
  }
  b.embed_url = backend.string("embed_url");
  if (b.embed_url && !starts_with(*b.embed_url, "stub") && !starts_with(*b.embed_url, "http://") &&
      !starts_with(*b.embed_url, "https://")) {
    config_error("backend.embed_url must be http(s)://... or stub[:SEED]");
  }
  b.model = *backend.string("model", true);
  c.model_name = b.model;
  b.embed_model = backend.string("embed_model");
  if (auto v = backend.uint32("timeout_seconds")) b.timeout = std::chrono::seconds(*v);
  if (auto v = backend.uint32("retry_attempts")) b.retry_attempts = *v;
  if (auto v = backend.uint32("retry_initial_delay_ms")) b.retry_initial_delay = std::chrono::milliseconds(*v);
  if (b.retry_attempts < 1) config_error("backend.retry_attempts must be >= 1");

  const Section cost(doc, "cost", false, {"price_per_1k_tokens", "budget_cap"});
  if (auto v = cost.number("price_per_1k_tokens")) c.price_per_1k_tokens = *v;
  c.budget_cap = cost.number("budget_cap");

  const Section output(doc, "output", true, {"dataset_path", "report_path", "rejects_path", "drift_path"});
  auto& o = cfg.output;
  o.dataset_path = resolve(base_dir, *output.string("dataset_path", true));
  o.report_path = resolve(base_dir, *output.string("report_path", true));
  o.rejects_path = resolve(base_dir, *output.string("rejects_path", true));
  if (auto v = output.string("drift_path")) {
    o.drift_path = resolve(base_dir, *v);
  } else {
    o.drift_path = o.report_path;
    o.drift_path.replace_extension(".drift.csv");
  }

  cfg.validate();
  return cfg;
}

RunConfigDocument load_run_config(const fs::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    config_error(e.what());
  }
  const auto doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) config_error("config " + path.string() + " is not valid JSON");
  return parse_run_config(doc, path.parent_path());
}

FormattingExample parse_seed(const json& doc) {
  try {
    if (!doc.is_object()) throw Error(ErrorCode::kSeedError, "seed must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (key != "question" && key != "options" && key != "answer" && key != "context") {
        throw Error(ErrorCode::kSeedError, "unknown seed key \"" + key + "\"");
      }
    }
    std::optional<std::string> context;
    if (doc.contains("context")) context = doc.at("context").get<std::string>();
    return FormattingExample::create(doc.at("question").get<std::string>(),
                                     doc.at("options").get<std::vector<std::string>>(),
                                     doc.at("answer").get<std::string>(), std::move(context),
                                     std::string(kInitialSeedId));
  } catch (const Error& e) {
    throw Error(ErrorCode::kSeedError, std::string("invalid seed: ") + e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSeedError, std::string("invalid seed: ") + e.what());
  }
}

FormattingExample load_seed(const fs::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSeedError, e.what());
  }
  const auto doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw Error(ErrorCode::kSeedError, "seed " + path.string() + " is not valid JSON");
  return parse_seed(doc);
}

LabelMode resolve_label_mode(const RunConfigDocument& config, const FormattingExample& seed) {
  if (config.label_kind == LabelMode::Kind::kVariable) return LabelMode::variable();
  try {
    return LabelMode::fixed(config.fixed_options ? *config.fixed_options : seed.options());
  } catch (const Error& e) {
    config_error(e.what());
  }
}

// ---------------------------------------------------------------------------

std::shared_ptr<ChatBackend> make_chat_backend(const BackendSettings& settings,
                                               std::uint64_t jitter_seed, Sleeper sleeper) {
  std::shared_ptr<ChatBackend> inner;
  if (starts_with(settings.chat_url, "script:")) {
    const fs::path path = settings.chat_url.substr(7);
    const auto fixture = json::parse(read_text_file(path), nullptr, /*allow_exceptions=*/false);
    if (fixture.is_discarded()) config_error("script fixture " + path.string() + " is not valid JSON");
    try {
      inner = std::make_shared<ScriptedBackend>(ScriptedBackend::parse_script(fixture));
    } catch (const Error& e) {
      config_error(e.what());
    }
  } else {
    inner = std::make_shared<HttpChatBackend>(
        HttpEndpoint{settings.chat_url, api_key_from_environment(), settings.timeout});
  }
  RetryPolicy policy;
  policy.max_attempts = settings.retry_attempts;
  policy.initial_delay = settings.retry_initial_delay;
  return std::make_shared<RetryingBackend>(std::move(inner), policy, jitter_seed, std::move(sleeper));
}

std::shared_ptr<Embedder> make_embedder(const BackendSettings& settings) {
  if (!settings.embed_url) return nullptr;
  const std::string& url = *settings.embed_url;
  std::shared_ptr<Embedder> inner;
  if (starts_with(url, "stub")) {
    std::uint64_t seed = 0;
    if (url.size() > 4) {
      const std::string_view digits = std::string_view(url).substr(5);
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
      if (url[4] != ':' || ec != std::errc() || ptr != digits.data() + digits.size()) {
        config_error("embed_url \"" + url + "\" is not stub or stub:SEED");
      }
    }
    inner = std::make_shared<StubEmbedder>(seed);
  } else {
    inner = std::make_shared<HttpEmbedder>(
        HttpEndpoint{url, api_key_from_environment(), settings.timeout},
        settings.embed_model.value_or(""));
  }
  return std::make_shared<CachingEmbedder>(std::move(inner));
}

// ---------------------------------------------------------------------------

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string dataset_line(const GeneratedRecord& record) { return dump_line(record_json(record)); }

std::vector<GeneratedRecord> parse_dataset(std::string_view jsonl) {
  std::vector<GeneratedRecord> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    const std::size_t nl = jsonl.find('\n', pos);
    std::string_view line = jsonl.substr(pos, nl == std::string_view::npos ? jsonl.npos : nl - pos);
    pos = nl == std::string_view::npos ? jsonl.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      const auto doc = json::parse(line);
      records.push_back(parse_record_line(doc));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::vector<GeneratedRecord> read_dataset(const fs::path& path) { return parse_dataset(read_text_file(path)); }

DatasetWriter::DatasetWriter(const fs::path& path) : path_(path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

void DatasetWriter::append(std::span<const GeneratedRecord> batch) {
  // Serialize first, then write once, so a batch lands whole or not at all
  // short of an OS-level failure.
  std::string chunk;
  for (const auto& record : batch) {
    chunk += dataset_line(record);
    chunk += '\n';
  }
  out_.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
  out_.flush();
  if (!out_) throw Error(ErrorCode::kIoError, "write to " + path_.string() + " failed");
  written_ += batch.size();
}

std::string rejects_jsonl(std::span<const Rejection> rejections) {
  std::string out;
  for (const auto& r : rejections) {
    ordered_json doc;
    doc["iteration"] = r.iteration;
    doc["source_offset"] = r.source_offset;
    doc["reason"] = to_string(r.reason);
    doc["detail"] = r.detail;
    doc["fragment"] = r.fragment;
    out += dump_line(doc);
    out += '\n';
  }
  return out;
}

ordered_json report_json(const RunReport& report, const CreationConfig& config) {
  ordered_json doc;
  doc["status"] = to_string(report.status);
  if (report.error_code) {
    doc["error"] = ordered_json{{"code", to_string(*report.error_code)}, {"message", report.error_message}};
  } else {
    doc["error"] = nullptr;
  }
  doc["strategy"] = to_string(config.strategy);
  doc["label_mode"] = to_string(config.label_mode.kind());
  doc["target_count"] = config.target_count;
  doc["batch_size"] = config.batch_size;
  doc["rng_seed"] = config.rng_seed;
  doc["iterations"] = report.iterations;
  doc["dataset_size"] = report.dataset.size();
  doc["candidates"] = report.candidates;
  doc["accepted"] = report.accepted;
  doc["truncated"] = report.truncated;
  const auto& rj = report.rejections;
  doc["rejections"] = ordered_json{{"malformed", rj.malformed},
                                   {"schema_violation", rj.schema_violation},
                                   {"duplicate", rj.duplicate},
                                   {"option_mismatch", rj.option_mismatch},
                                   {"total", rj.total()}};
  const auto& l = report.ledger;
  doc["ledger"] = ordered_json{{"prompt_tokens", l.prompt_tokens()},
                               {"completion_tokens", l.completion_tokens()},
                               {"total_tokens", l.total_tokens()},
                               {"price_per_1k_tokens", config.price_per_1k_tokens},
                               {"total_usd", l.total_usd()},
                               {"total_pico_usd", l.total().pico()},
                               {"estimated", l.estimated()}};
  doc["embedder"] = report.embedder_configured;
  auto& drift = doc["drift"] = ordered_json::array();
  for (const auto& row : report.drift_rows) {
    ordered_json r;
    r["iteration"] = row.iteration;
    r["seed_id"] = row.seed_id;
    if (row.mean_cosine_to_initial) {
      r["mean_cosine_to_initial"] = *row.mean_cosine_to_initial;
    } else {
      r["mean_cosine_to_initial"] = nullptr;
    }
    drift.push_back(std::move(r));
  }
  return doc;
}

std::vector<DriftRow> drift_rows_from_report(const json& report) {
  if (!report.is_object()) throw Error(ErrorCode::kParseError, "report is not a JSON object");
  if (!report.value("embedder", false)) {
    throw Error(ErrorCode::kMissingDriftData, "run had no embedder; drift was not recorded");
  }
  const auto it = report.find("drift");
  if (it == report.end() || !it->is_array()) {
    throw Error(ErrorCode::kMissingDriftData, "report has no drift rows");
  }
  std::vector<DriftRow> rows;
  try {
    for (const auto& r : *it) {
      DriftRow row{r.at("iteration").get<std::uint32_t>(), r.at("seed_id").get<std::string>(), std::nullopt};
      const auto& v = r.at("mean_cosine_to_initial");
      if (!v.is_null()) row.mean_cosine_to_initial = v.get<double>();
      rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad drift row: ") + e.what());
  }
  return rows;
}

std::string drift_csv(std::span<const DriftRow> rows) {
  std::string out = "iteration,seed_id,mean_cosine_to_initial\n";
  for (const auto& row : rows) {
    out += std::to_string(row.iteration);
    out += ',';
    out += csv_field(row.seed_id);
    out += ',';
    if (row.mean_cosine_to_initial) out += format_double(*row.mean_cosine_to_initial);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

DatasetStats compute_stats(std::span<const GeneratedRecord> records) {
  DatasetStats stats;
  stats.records = records.size();
  std::unordered_set<std::string> keys;
  std::size_t total_length = 0;
  for (const auto& r : records) {
    ++stats.answer_histogram[r.example.answer()];
    ++stats.option_count_histogram[r.example.options().size()];
    if (!keys.insert(dedup_key(r.example)).second) ++stats.duplicate_keys;
    total_length += count_code_points(r.example.question());
  }
  if (!records.empty()) {
    stats.mean_question_length = static_cast<double>(total_length) / static_cast<double>(records.size());
  }
  return stats;
}

ordered_json stats_json(const DatasetStats& stats) {
  ordered_json doc;
  doc["records"] = stats.records;
  doc["answer_histogram"] = ordered_json::object();
  for (const auto& [answer, n] : stats.answer_histogram) doc["answer_histogram"][answer] = n;
  doc["option_count_histogram"] = ordered_json::object();
  for (const auto& [count, n] : stats.option_count_histogram) {
    doc["option_count_histogram"][std::to_string(count)] = n;
  }
  doc["duplicate_keys"] = stats.duplicate_keys;
  doc["mean_question_length"] = stats.mean_question_length;
  return doc;
}

std::string stats_text(const DatasetStats& stats) {
  std::ostringstream out;
  out << "records: " << stats.records << '\n';
  out << "duplicate keys: " << stats.duplicate_keys << '\n';
  out << "mean question length: " << format_double(stats.mean_question_length) << '\n';
  out << "answers:\n";
  for (const auto& [answer, n] : stats.answer_histogram) out << "  " << answer << ": " << n << '\n';
  out << "option counts:\n";
  for (const auto& [count, n] : stats.option_count_histogram) out << "  " << count << ": " << n << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------

std::vector<RecordedCompletion> parse_completion_corpus(std::string_view jsonl) {
  std::vector<RecordedCompletion> corpus;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    const std::size_t nl = jsonl.find('\n', pos);
    std::string_view line = jsonl.substr(pos, nl == std::string_view::npos ? jsonl.npos : nl - pos);
    pos = nl == std::string_view::npos ? jsonl.size() : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const auto doc = json::parse(line);
      if (doc.is_string()) {
        corpus.push_back({std::to_string(line_no), doc.get<std::string>()});
      } else {
        corpus.push_back({doc.contains("id") ? doc.at("id").get<std::string>() : std::to_string(line_no),
                          doc.at("text").get<std::string>()});
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return corpus;
}

std::vector<RevalidationDecision> revalidate(std::span<const RecordedCompletion> corpus,
                                             const LabelMode& mode, const FormattingExample& seed) {
  DedupCache cache;
  cache.insert(dedup_key(seed));
  std::vector<RevalidationDecision> decisions;
  std::uint32_t iteration = 0;
  for (const auto& completion : corpus) {
    const auto outcome = validate_completion(completion.text, mode, seed, cache, ++iteration);
    std::vector<RevalidationDecision> batch;
    for (const auto& r : outcome.accepted) {
      batch.push_back({completion.id, r.source_offset, true, std::nullopt});
    }
    for (const auto& r : outcome.rejections) {
      batch.push_back({completion.id, r.source_offset, false, r.reason});
    }
    std::stable_sort(batch.begin(), batch.end(),
                     [](const auto& a, const auto& b) { return a.source_offset < b.source_offset; });
    decisions.insert(decisions.end(), batch.begin(), batch.end());
  }
  return decisions;
}

}  // namespace seedforge
