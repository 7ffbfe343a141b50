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

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "seedforge/embedding.hpp"
#include "seedforge/model.hpp"

namespace seedforge {

/// Uniform integer in [0, n) from a 64-bit engine, by rejection. Unlike
/// std::uniform_int_distribution the result is the same on every standard
/// library.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

/// Chooses the formatting example for the next iteration from the records
/// accepted in the previous one (self-reference).
///
///   Random       uniform pick from the batch
///   Contrastive  batch record whose question is least cosine-similar to the
///                current seed's question (first index wins ties)
///   Similar      most similar, same tie rule
///   Tree         every accepted record joins a FIFO frontier; the next seed
///                is the frontier's front, giving a breadth-first traversal
///                of the generation tree
class SeedSampler {
 public:
  SeedSampler(Strategy strategy, FormattingExample initial_seed, std::uint64_t rng_seed);

  Strategy strategy() const noexcept { return strategy_; }
  const FormattingExample& current() const noexcept { return current_; }
  std::size_t frontier_size() const noexcept { return frontier_.size(); }

  /// Picks the next seed, makes it current and returns it.
  ///
  /// `embedder` is required by Contrastive and Similar (Error(kPrecondition)
  /// when null). Errors: kEmptyBatch for an empty batch outside Tree;
  /// kEmptyFrontier for Tree when batch and frontier are both empty.
  const FormattingExample& advance(std::span<const GeneratedRecord> accepted_batch,
                                   Embedder* embedder = nullptr);

  // Tree fan-out: enqueue a batch without moving, then take frontier seeds
  // one by one. put_back() returns a seed to the front, ahead of everything.
  void enqueue(std::span<const GeneratedRecord> accepted_batch);
  std::optional<FormattingExample> dequeue();
  void put_back(FormattingExample seed);

 private:
  std::size_t select_by_similarity(std::span<const GeneratedRecord> batch, Embedder& embedder,
                                   bool most_similar) const;

  Strategy strategy_;
  FormattingExample current_;
  std::deque<FormattingExample> frontier_;
  std::mt19937_64 rng_;
};

/// Re-runs a sampler over recorded batches and returns the seed sequence,
/// starting with `initial_seed` and adding one seed per batch.
std::vector<FormattingExample> replay(Strategy strategy, std::uint64_t rng_seed,
                                      const FormattingExample& initial_seed,
                                      std::span<const std::vector<GeneratedRecord>> batches,
                                      Embedder* embedder = nullptr);

}  // namespace seedforge
