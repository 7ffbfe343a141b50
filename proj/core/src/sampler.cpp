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

#include "seedforge/sampler.hpp"

#include <limits>

#include "seedforge/error.hpp"

namespace seedforge {

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kPrecondition, "uniform_index over an empty range");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  // Largest multiple of `bound` representable; draws at or above it are biased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return static_cast<std::size_t>(draw % bound);
}

SeedSampler::SeedSampler(Strategy strategy, FormattingExample initial_seed, std::uint64_t rng_seed)
    : strategy_(strategy), current_(std::move(initial_seed)), rng_(rng_seed) {}

std::size_t SeedSampler::select_by_similarity(std::span<const GeneratedRecord> batch,
                                              Embedder& embedder, bool most_similar) const {
  const EmbeddingVector anchor = embedder.embed(current_.question());
  std::size_t best = 0;
  double best_score = cosine(anchor, embedder.embed(batch[0].example.question()));
  for (std::size_t i = 1; i < batch.size(); ++i) {
    const double score = cosine(anchor, embedder.embed(batch[i].example.question()));
    if (most_similar ? score > best_score : score < best_score) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

const FormattingExample& SeedSampler::advance(std::span<const GeneratedRecord> accepted_batch,
                                              Embedder* embedder) {
  if (strategy_ == Strategy::kTree) {
    enqueue(accepted_batch);
    auto next = dequeue();
    if (!next) throw Error(ErrorCode::kEmptyFrontier, "tree frontier is empty");
    current_ = std::move(*next);
    return current_;
  }

  if (accepted_batch.empty()) throw Error(ErrorCode::kEmptyBatch, "no accepted records to sample from");

  std::size_t pick = 0;
  switch (strategy_) {
    case Strategy::kRandom:
      pick = uniform_index(rng_, accepted_batch.size());
      break;
    case Strategy::kContrastive:
    case Strategy::kSimilar:
      if (embedder == nullptr) {
        throw Error(ErrorCode::kPrecondition,
                    std::string(to_string(strategy_)) + " selection needs an embedder");
      }
      pick = select_by_similarity(accepted_batch, *embedder, strategy_ == Strategy::kSimilar);
      break;
    case Strategy::kTree:
      break;
  }
  current_ = accepted_batch[pick].example;
  return current_;
}

void SeedSampler::enqueue(std::span<const GeneratedRecord> accepted_batch) {
  for (const auto& record : accepted_batch) frontier_.push_back(record.example);
}

std::optional<FormattingExample> SeedSampler::dequeue() {
  if (frontier_.empty()) return std::nullopt;
  FormattingExample front = std::move(frontier_.front());
  frontier_.pop_front();
  return front;
}

void SeedSampler::put_back(FormattingExample seed) { frontier_.push_front(std::move(seed)); }

std::vector<FormattingExample> replay(Strategy strategy, std::uint64_t rng_seed,
                                      const FormattingExample& initial_seed,
                                      std::span<const std::vector<GeneratedRecord>> batches,
                                      Embedder* embedder) {
  SeedSampler sampler(strategy, initial_seed, rng_seed);
  std::vector<FormattingExample> seeds{initial_seed};
  seeds.reserve(batches.size() + 1);
  for (const auto& batch : batches) seeds.push_back(sampler.advance(batch, embedder));
  return seeds;
}

}  // namespace seedforge
