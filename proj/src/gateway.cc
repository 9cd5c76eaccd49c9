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

#include "ordshap/gateway.h"

#include <algorithm>
#include <exception>
#include <thread>

namespace ordshap {

std::optional<double> EvalCache::Lookup(const std::string& key) {
  {
    std::shared_lock lock(mu_);
    const auto it = values_.find(key);
    if (it != values_.end()) {
      ++hits_;
      return it->second;
    }
  }
  ++misses_;
  return std::nullopt;
}

void EvalCache::Insert(const std::string& key, double value) {
  std::unique_lock lock(mu_);
  if (values_.size() >= capacity_ && !values_.count(key)) return;
  values_.emplace(key, value);
}

std::size_t EvalCache::size() const {
  std::shared_lock lock(mu_);
  return values_.size();
}

ModelGateway::ModelGateway(ModelEndpoint endpoint,
                           std::unique_ptr<ModelClient> client,
                           GatewayOptions options)
    : endpoint_(std::move(endpoint)),
      client_(std::move(client)),
      options_(options),
      cache_(options.cache_capacity) {
  endpoint_.Validate();
  if (!client_) throw std::invalid_argument("gateway needs a model client");
  if (options_.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
}

std::vector<double> ModelGateway::SendChunked(
    const std::vector<TokenSequence>& sequences, int class_index,
    const std::vector<std::size_t>& origin) {
  std::vector<double> out(sequences.size());
  const std::size_t limit = static_cast<std::size_t>(endpoint_.batch_limit);
  const std::size_t chunks = (sequences.size() + limit - 1) / limit;
  if (chunks == 0) return out;

  std::vector<std::exception_ptr> errors(chunks);
  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * limit;
    const std::size_t end = std::min(sequences.size(), begin + limit);
    std::vector<TokenSequence> batch(sequences.begin() + begin,
                                     sequences.begin() + end);
    try {
      ++round_trips_;
      sequences_sent_ += static_cast<std::int64_t>(batch.size());
      const std::vector<double> values = client_->Call(batch, class_index);
      std::copy(values.begin(), values.end(), out.begin() + begin);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(options_.jobs), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      run_chunk(c);
      if (errors[c]) break;
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chunks; c = next++) run_chunk(c);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  for (std::size_t c = 0; c < chunks; ++c) {
    if (!errors[c]) continue;
    const std::size_t failing = origin.empty() ? c * limit : origin[c * limit];
    try {
      std::rethrow_exception(errors[c]);
    } catch (const std::exception& e) {
      throw BatchError("batch starting at sequence " +
                           std::to_string(failing) + " failed: " + e.what(),
                       failing);
    }
  }
  return out;
}

std::vector<double> ModelGateway::EvaluateBatch(
    const std::vector<TokenSequence>& sequences, int class_index) {
  return SendChunked(sequences, class_index, {});
}

std::vector<double> ModelGateway::Evaluate(
    const std::vector<TokenSequence>& sequences, int class_index) {
  if (!options_.use_cache) return EvaluateBatch(sequences, class_index);

  std::vector<double> out(sequences.size());
  // Resolution for each distinct key seen in this call.
  struct Pending {
    std::vector<std::size_t> slots;
    std::optional<double> value;
    std::shared_future<double> awaited;
    std::size_t own = SIZE_MAX;  // index into to_send when we send it
  };
  std::unordered_map<std::string, Pending> pending;
  std::vector<std::string> order;
  std::vector<TokenSequence> to_send;
  std::vector<std::size_t> to_send_origin;
  std::vector<std::promise<double>> promises;
  std::vector<std::string> own_keys;

  const std::string prefix = std::to_string(class_index) + "|";
  for (std::size_t k = 0; k < sequences.size(); ++k) {
    std::string key = prefix + CanonicalKey(sequences[k]);
    auto [it, inserted] = pending.try_emplace(key);
    it->second.slots.push_back(k);
    if (!inserted) {
      cache_.RecordHit();
      continue;
    }
    order.push_back(key);
    if (auto cached = cache_.Lookup(key)) {
      it->second.value = *cached;
      continue;
    }
    std::lock_guard<std::mutex> lock(inflight_mu_);
    const auto flight = inflight_.find(key);
    if (flight != inflight_.end()) {
      it->second.awaited = flight->second;
      continue;
    }
    promises.emplace_back();
    inflight_.emplace(key, promises.back().get_future().share());
    it->second.own = to_send.size();
    to_send.push_back(sequences[k]);
    to_send_origin.push_back(k);
    own_keys.push_back(key);
  }

  std::vector<double> sent;
  try {
    sent = SendChunked(to_send, class_index, to_send_origin);
  } catch (...) {
    std::lock_guard<std::mutex> lock(inflight_mu_);
    for (std::size_t j = 0; j < own_keys.size(); ++j) {
      promises[j].set_exception(std::current_exception());
      inflight_.erase(own_keys[j]);
    }
    throw;
  }
  {
    std::lock_guard<std::mutex> lock(inflight_mu_);
    for (std::size_t j = 0; j < own_keys.size(); ++j) {
      cache_.Insert(own_keys[j], sent[j]);
      promises[j].set_value(sent[j]);
      inflight_.erase(own_keys[j]);
    }
  }

  for (const std::string& key : order) {
    Pending& p = pending[key];
    double value;
    if (p.value) {
      value = *p.value;
    } else if (p.own != SIZE_MAX) {
      value = sent[p.own];
    } else {
      value = p.awaited.get();
    }
    for (std::size_t slot : p.slots) out[slot] = value;
  }
  return out;
}

GatewayStats ModelGateway::stats() const {
  GatewayStats s;
  s.round_trips = round_trips_.load();
  s.sequences_sent = sequences_sent_.load();
  s.cache_hits = cache_.hits();
  s.cache_misses = cache_.misses();
  return s;
}

ModelGame::ModelGame(std::shared_ptr<ModelGateway> gateway,
                     SequenceSample sample, int class_index,
                     std::string descriptor)
    : gateway_(std::move(gateway)),
      sample_(std::move(sample)),
      class_index_(class_index),
      descriptor_(std::move(descriptor)) {
  if (!gateway_) throw std::invalid_argument("model game needs a gateway");
  sample_.Validate();
  references_ = sample_.ReferenceSequences();
}

double ModelGame::Evaluate(const Subset& coalition,
                           const Permutation& order) const {
  const GameQuery query{coalition, order};
  return EvaluateMany(std::span<const GameQuery>(&query, 1)).front();
}

std::vector<double> ModelGame::EvaluateMany(
    std::span<const GameQuery> queries) const {
  const std::size_t refs = references_.size();
  std::vector<TokenSequence> sequences;
  sequences.reserve(queries.size() * refs);
  for (const GameQuery& q : queries) {
    for (const TokenSequence& reference : references_) {
      sequences.push_back(
          Materialize(sample_.tokens, q.coalition, q.order, reference));
    }
  }
  const std::vector<double> values =
      gateway_->Evaluate(sequences, class_index_);
  std::vector<double> out(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    double sum = 0.0;
    for (std::size_t r = 0; r < refs; ++r) sum += values[q * refs + r];
    out[q] = sum / static_cast<double>(refs);
  }
  return out;
}

}  // namespace ordshap
