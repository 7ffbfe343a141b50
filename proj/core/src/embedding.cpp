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

#include "seedforge/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <nlohmann/json.hpp>

#include "http_transport.hpp"
#include "seedforge/error.hpp"

namespace seedforge {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// (0, 1]; never zero so log() stays finite.
double open_unit(std::uint64_t& state) noexcept {
  return (static_cast<double>(splitmix64(state) >> 11) + 1.0) * 0x1.0p-53;
}

double dot(std::span<const double> u, std::span<const double> v) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  return acc;
}

}  // namespace

EmbeddingVector EmbeddingVector::normalized(std::vector<double> raw) {
  if (raw.empty()) throw Error(ErrorCode::kPrecondition, "embedding has no components");
  double sum_sq = 0.0;
  for (const double x : raw) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kPrecondition, "embedding has non-finite component");
    sum_sq += x * x;
  }
  const double norm = std::sqrt(sum_sq);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kPrecondition, "embedding has zero or overflowing norm");
  }
  for (double& x : raw) x /= norm;
  return EmbeddingVector(std::move(raw));
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "cosine of vectors with dimensions " +
                                                   std::to_string(u.size()) + " and " +
                                                   std::to_string(v.size()));
  }
  const double nu = std::sqrt(dot(u, u));
  const double nv = std::sqrt(dot(v, v));
  if (!(nu > 0.0) || !(nv > 0.0)) throw Error(ErrorCode::kPrecondition, "cosine of a zero vector");
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  return cosine(u.values(), v.values());
}

StubEmbedder::StubEmbedder(std::uint64_t seed, std::size_t dimension)
    : seed_(seed), dimension_(dimension) {
  if (dimension_ == 0) throw Error(ErrorCode::kPrecondition, "stub embedder dimension must be positive");
}

EmbeddingVector StubEmbedder::embed(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::kEmptyText, "cannot embed empty text");
  std::uint64_t state = fnv1a(text) ^ (seed_ * 0x9e3779b97f4a7c15ULL);
  std::vector<double> raw(dimension_);
  // Box-Muller: isotropic Gaussians normalize to a uniform point on the sphere.
  for (std::size_t i = 0; i < dimension_; i += 2) {
    const double r = std::sqrt(-2.0 * std::log(open_unit(state)));
    const double theta = 2.0 * std::numbers::pi * open_unit(state);
    raw[i] = r * std::cos(theta);
    if (i + 1 < dimension_) raw[i + 1] = r * std::sin(theta);
  }
  return EmbeddingVector::normalized(std::move(raw));
}

CachingEmbedder::CachingEmbedder(std::shared_ptr<Embedder> inner) : inner_(std::move(inner)) {
  if (!inner_) throw Error(ErrorCode::kPrecondition, "caching embedder needs an inner embedder");
}

EmbeddingVector CachingEmbedder::embed(std::string_view text) {
  {
    std::shared_lock lock(mu_);
    if (auto it = cache_.find(std::string(text)); it != cache_.end()) return it->second;
  }
  EmbeddingVector v = inner_->embed(text);
  std::unique_lock lock(mu_);
  if (dimension_ == 0) dimension_ = v.dimension();
  if (v.dimension() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch, "embedder returned dimension " +
                                                   std::to_string(v.dimension()) + ", expected " +
                                                   std::to_string(dimension_));
  }
  cache_.insert_or_assign(std::string(text), v);
  return v;
}

std::size_t CachingEmbedder::cache_size() const {
  std::shared_lock lock(mu_);
  return cache_.size();
}

HttpEmbedder::HttpEmbedder(HttpEndpoint endpoint, std::string model)
    : endpoint_(std::move(endpoint)), model_(std::move(model)) {
  if (endpoint_.api_key.empty()) throw Error(ErrorCode::kAuthError, "missing API key");
  (void)detail::Url::parse(endpoint_.url);
}

EmbeddingVector HttpEmbedder::embed(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::kEmptyText, "cannot embed empty text");
  nlohmann::ordered_json body;
  body["model"] = model_;
  body["input"] = std::string(text);
  const auto result = detail::post_json(detail::Url::parse(endpoint_.url), body.dump(),
                                        endpoint_.api_key, endpoint_.timeout);
  if (result.status < 200 || result.status >= 300) throw_for_status(result.status, result.body);
  return parse_embedding_body(result.body);
}

EmbeddingVector parse_embedding_body(std::string_view body) {
  const auto doc = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("data") || !doc["data"].is_array() ||
      doc["data"].empty() || !doc["data"][0].is_object() || !doc["data"][0].contains("embedding") ||
      !doc["data"][0]["embedding"].is_array()) {
    throw Error(ErrorCode::kMalformedResponse, "embedding response has no data[0].embedding array");
  }
  std::vector<double> raw;
  for (const auto& x : doc["data"][0]["embedding"]) {
    if (!x.is_number()) throw Error(ErrorCode::kMalformedResponse, "embedding has non-numeric entry");
    raw.push_back(x.get<double>());
  }
  try {
    return EmbeddingVector::normalized(std::move(raw));
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedResponse, e.what());
  }
}

}  // namespace seedforge
