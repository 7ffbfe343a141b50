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
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "seedforge/chat_backend.hpp"

namespace seedforge {

/// A unit-length embedding. The only way to build one is normalized(), so
/// every instance has Euclidean norm 1 within rounding.
class EmbeddingVector {
 public:
  /// Throws Error(kPrecondition) for empty input, non-finite entries or a
  /// zero vector.
  static EmbeddingVector normalized(std::vector<double> raw);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t dimension() const noexcept { return values_.size(); }

  bool operator==(const EmbeddingVector&) const = default;

 private:
  explicit EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

/// dot(u, v) / (|u| |v|), clamped to [-1, 1]. Symmetric bit-for-bit.
/// Throws Error(kDimensionMismatch) on unequal lengths and
/// Error(kPrecondition) on a zero vector.
double cosine(std::span<const double> u, std::span<const double> v);
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

class Embedder {
 public:
  virtual ~Embedder() = default;
  /// Throws Error(kEmptyText) for empty input.
  virtual EmbeddingVector embed(std::string_view text) = 0;
};

/// Offline embedder: hashes the text together with a seed into a stream of
/// pseudo-random Gaussians and projects it onto the unit sphere. Equal text
/// maps to equal vectors; distinct texts collide only if 64-bit hashes do.
class StubEmbedder final : public Embedder {
 public:
  explicit StubEmbedder(std::uint64_t seed = 0, std::size_t dimension = 64);
  EmbeddingVector embed(std::string_view text) override;

 private:
  std::uint64_t seed_;
  std::size_t dimension_;
};

/// Memoizes another embedder for the lifetime of a run and enforces a single
/// dimension across all returned vectors (Error(kDimensionMismatch)).
/// Safe for concurrent use.
class CachingEmbedder final : public Embedder {
 public:
  explicit CachingEmbedder(std::shared_ptr<Embedder> inner);
  EmbeddingVector embed(std::string_view text) override;
  std::size_t cache_size() const;

 private:
  std::shared_ptr<Embedder> inner_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, EmbeddingVector> cache_;
  std::size_t dimension_ = 0;
};

/// OpenAI-compatible embeddings endpoint: POST {"model", "input"} and read
/// data[0].embedding.
class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(HttpEndpoint endpoint, std::string model);
  EmbeddingVector embed(std::string_view text) override;

 private:
  HttpEndpoint endpoint_;
  std::string model_;
};

/// Parses an embeddings response body; Error(kMalformedResponse) on any
/// shape problem.
EmbeddingVector parse_embedding_body(std::string_view body);

}  // namespace seedforge
