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

// Model endpoints and the JSON wire protocol.
//
// Request  (one line on a pipe, or the POST body of /evaluate):
//   {"class_index": 0, "id": "req-1", "sequences": [["a", "[MASK]"], ...]}
// Response:
//   {"id": "req-1", "outputs": [0.25, ...]}   or   {"error": "..."}

#ifndef ORDSHAP_TRANSPORT_H_
#define ORDSHAP_TRANSPORT_H_

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ordshap/sequence.h"

namespace ordshap {

// The endpoint could not be reached or the connection broke. Retriable.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The endpoint did not answer within the configured timeout.
class TimeoutError : public TransportError {
 public:
  using TransportError::TransportError;
};

// The endpoint answered with something that is not a valid response.
class MalformedResponseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The endpoint reported an error for the request.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A batch failed; `failing_index` is the position of the first sequence of
// the failing request within the caller's list.
class BatchError : public std::runtime_error {
 public:
  BatchError(const std::string& message, std::size_t failing_index)
      : std::runtime_error(message), failing_index_(failing_index) {}
  std::size_t failing_index() const { return failing_index_; }

 private:
  std::size_t failing_index_;
};

struct ModelEndpoint {
  enum class Transport { kInProcess, kPipeJsonl, kHttpJson };

  Transport transport = Transport::kInProcess;
  // Pipe: shell command to spawn. HTTP: "http://host:port".
  std::string address;
  int batch_limit = 64;
  std::chrono::milliseconds timeout{30000};

  // Throws std::invalid_argument on batch_limit < 1 or a missing address
  // for the out-of-process transports.
  void Validate() const;
};

// Parses "in_process", "pipe_jsonl" or "http_json".
ModelEndpoint::Transport ParseTransport(const std::string& name);

nlohmann::json EncodeRequest(const std::string& id, int class_index,
                             const std::vector<TokenSequence>& sequences);
// Returns the outputs. Throws ModelError for {"error": ...} and
// MalformedResponseError for anything else that is not a response to `id`
// with `expected` outputs.
std::vector<double> DecodeResponse(const nlohmann::json& response,
                                   const std::string& id,
                                   std::size_t expected);

// One request/response round trip with a model.
class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual std::vector<double> Call(const std::vector<TokenSequence>& batch,
                                   int class_index) = 0;
};

using BatchModelFn = std::function<std::vector<double>(
    const std::vector<TokenSequence>& batch, int class_index)>;

class InProcessClient : public ModelClient {
 public:
  explicit InProcessClient(BatchModelFn fn) : fn_(std::move(fn)) {}
  std::vector<double> Call(const std::vector<TokenSequence>& batch,
                           int class_index) override;

 private:
  BatchModelFn fn_;
};

// Spawns `sh -c command` and exchanges one JSON line per request over its
// stdin/stdout. Requests are serialized.
class PipeJsonlClient : public ModelClient {
 public:
  PipeJsonlClient(std::string command, std::chrono::milliseconds timeout);
  ~PipeJsonlClient() override;
  PipeJsonlClient(const PipeJsonlClient&) = delete;
  PipeJsonlClient& operator=(const PipeJsonlClient&) = delete;

  std::vector<double> Call(const std::vector<TokenSequence>& batch,
                           int class_index) override;

 private:
  void Start();
  void Stop();
  std::string ReadLine();

  std::string command_;
  std::chrono::milliseconds timeout_;
  std::mutex mu_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::size_t next_id_ = 0;
};

// POSTs each request to <address>/evaluate.
class HttpJsonClient : public ModelClient {
 public:
  HttpJsonClient(std::string address, std::chrono::milliseconds timeout);
  ~HttpJsonClient() override;

  std::vector<double> Call(const std::vector<TokenSequence>& batch,
                           int class_index) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Builds the client for an endpoint. kInProcess needs `in_process`.
std::unique_ptr<ModelClient> MakeClient(const ModelEndpoint& endpoint,
                                        BatchModelFn in_process = nullptr);

}  // namespace ordshap

#endif  // ORDSHAP_TRANSPORT_H_
