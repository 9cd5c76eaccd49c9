/*
 * Copyright 2026 The OrdShap Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ORDSHAP_GATEWAY_H_
#define ORDSHAP_GATEWAY_H_

#include <atomic>
#include <cstdint>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "ordshap/game.h"
#include "ordshap/sequence.h"
#include "ordshap/transport.h"

namespace ordshap {

// Model outputs keyed by the exact materialized sequence (and class index),
// so distinct (S, sigma) pairs that produce the same masked view share one
// model call. Once full, new keys are not stored.
class EvalCache {
 public:
  explicit EvalCache(std::size_t capacity = 1 << 22) : capacity_(capacity) {}

  std::optional<double> Lookup(const std::string& key);
  void Insert(const std::string& key, double value);

  // Counts a hit served outside Lookup (a repeat within one request).
  void RecordHit() { ++hits_; }

  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }
  std::int64_t hits() const { return hits_.load(); }
  std::int64_t misses() const { return misses_.load(); }

 private:
  std::size_t capacity_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, double> values_;
  std::atomic<std::int64_t> hits_{0};
  std::atomic<std::int64_t> misses_{0};
};

struct GatewayOptions {
  bool use_cache = true;
  std::size_t cache_capacity = 1 << 22;
  int jobs = 1;  // concurrent requests in flight
};

struct GatewayStats {
  std::int64_t round_trips = 0;
  std::int64_t sequences_sent = 0;
  std::int64_t cache_hits = 0;
  std::int64_t cache_misses = 0;
};

// Batches, deduplicates and dispatches sequence evaluations to a model.
class ModelGateway {
 public:
  ModelGateway(ModelEndpoint endpoint, std::unique_ptr<ModelClient> client,
               GatewayOptions options = {});

  // Outputs aligned with `sequences`. Unique uncached sequences are sent in
  // requests of at most batch_limit; identical keys in flight on other
  // threads are awaited instead of re-sent. Throws BatchError wrapping the
  // first failing request.
  std::vector<double> Evaluate(const std::vector<TokenSequence>& sequences,
                               int class_index);

  // Sends every sequence, in order, bypassing the cache.
  std::vector<double> EvaluateBatch(const std::vector<TokenSequence>& sequences,
                                    int class_index);

  GatewayStats stats() const;
  const ModelEndpoint& endpoint() const { return endpoint_; }
  const EvalCache& cache() const { return cache_; }

 private:
  std::vector<double> SendChunked(const std::vector<TokenSequence>& sequences,
                                  int class_index,
                                  const std::vector<std::size_t>& origin);

  ModelEndpoint endpoint_;
  std::unique_ptr<ModelClient> client_;
  GatewayOptions options_;
  EvalCache cache_;
  std::mutex inflight_mu_;
  std::unordered_map<std::string, std::shared_future<double>> inflight_;
  std::atomic<std::int64_t> round_trips_{0};
  std::atomic<std::int64_t> sequences_sent_{0};
};

// omega(S, sigma) = f(materialize(x, S, sigma, x')), averaged over the
// sample's reference sequences.
class ModelGame : public OrderedGame {
 public:
  // Throws std::invalid_argument if the sample is invalid.
  ModelGame(std::shared_ptr<ModelGateway> gateway, SequenceSample sample,
            int class_index = 0, std::string descriptor = "model");

  int num_players() const override { return sample_.size(); }
  double Evaluate(const Subset& coalition,
                  const Permutation& order) const override;
  std::vector<double> EvaluateMany(
      std::span<const GameQuery> queries) const override;
  std::string Descriptor() const override { return descriptor_; }

  const SequenceSample& sample() const { return sample_; }
  ModelGateway& gateway() const { return *gateway_; }

 private:
  std::shared_ptr<ModelGateway> gateway_;
  SequenceSample sample_;
  std::vector<TokenSequence> references_;
  int class_index_;
  std::string descriptor_;
};

}  // namespace ordshap

#endif  // ORDSHAP_GATEWAY_H_
