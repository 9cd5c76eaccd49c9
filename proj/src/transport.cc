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

#include "ordshap/transport.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "httplib.h"

namespace ordshap {

void ModelEndpoint::Validate() const {
  if (batch_limit < 1) throw std::invalid_argument("batch_limit must be >= 1");
  if (transport != Transport::kInProcess && address.empty()) {
    throw std::invalid_argument("endpoint address is required for "
                                "pipe_jsonl and http_json transports");
  }
  if (timeout.count() <= 0) throw std::invalid_argument("timeout must be > 0");
}

ModelEndpoint::Transport ParseTransport(const std::string& name) {
  if (name == "in_process") return ModelEndpoint::Transport::kInProcess;
  if (name == "pipe_jsonl") return ModelEndpoint::Transport::kPipeJsonl;
  if (name == "http_json") return ModelEndpoint::Transport::kHttpJson;
  throw std::invalid_argument("unknown transport '" + name +
                              "' (expected in_process, pipe_jsonl, http_json)");
}

nlohmann::json EncodeRequest(const std::string& id, int class_index,
                             const std::vector<TokenSequence>& sequences) {
  nlohmann::json seqs = nlohmann::json::array();
  for (const TokenSequence& s : sequences) seqs.push_back(SequenceToJson(s));
  return {{"id", id}, {"class_index", class_index}, {"sequences", seqs}};
}

std::vector<double> DecodeResponse(const nlohmann::json& response,
                                   const std::string& id,
                                   std::size_t expected) {
  if (!response.is_object()) {
    throw MalformedResponseError("response is not a JSON object");
  }
  if (response.contains("error")) {
    const auto& e = response["error"];
    throw ModelError("model reported an error: " +
                     (e.is_string() ? e.get<std::string>() : e.dump()));
  }
  if (!response.contains("id") || !response["id"].is_string() ||
      response["id"].get<std::string>() != id) {
    throw MalformedResponseError("response id does not match request '" + id +
                                 "'");
  }
  if (!response.contains("outputs") || !response["outputs"].is_array()) {
    throw MalformedResponseError("response has no outputs array");
  }
  const auto& outputs = response["outputs"];
  if (outputs.size() != expected) {
    throw MalformedResponseError(
        "response has " + std::to_string(outputs.size()) + " outputs for " +
        std::to_string(expected) + " sequences");
  }
  std::vector<double> out;
  out.reserve(expected);
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    if (!outputs[k].is_number()) {
      throw MalformedResponseError("output " + std::to_string(k) +
                                   " is not a number");
    }
    out.push_back(outputs[k].get<double>());
  }
  return out;
}

std::vector<double> InProcessClient::Call(
    const std::vector<TokenSequence>& batch, int class_index) {
  std::vector<double> out = fn_(batch, class_index);
  if (out.size() != batch.size()) {
    throw MalformedResponseError("in-process model returned " +
                                 std::to_string(out.size()) + " outputs for " +
                                 std::to_string(batch.size()) + " sequences");
  }
  return out;
}

namespace {

void IgnoreSigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

PipeJsonlClient::PipeJsonlClient(std::string command,
                                 std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
  IgnoreSigpipe();
  Start();
}

PipeJsonlClient::~PipeJsonlClient() { Stop(); }

void PipeJsonlClient::Start() {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0 || ::pipe2(out_pipe, O_CLOEXEC) != 0) {
    throw TransportError(std::string("pipe: ") + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) throw TransportError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    // Own process group, so Stop() also reaches whatever sh spawns.
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
}

void PipeJsonlClient::Stop() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    ::kill(-pid_, SIGTERM);
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::seconds(1);
    while (::waitpid(pid_, nullptr, WNOHANG) == 0) {
      if (std::chrono::steady_clock::now() > deadline) {
        ::kill(-pid_, SIGKILL);
        ::waitpid(pid_, nullptr, 0);
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  }
  pid_ = -1;
}

std::string PipeJsonlClient::ReadLine() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  while (true) {
    const auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      throw TimeoutError("model process did not answer within " +
                         std::to_string(timeout_.count()) + " ms");
    }
    pollfd fd{from_child_, POLLIN, 0};
    const int ready = ::poll(&fd, 1, static_cast<int>(left.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready == 0) continue;  // re-checks the deadline
    char chunk[4096];
    const ssize_t got = ::read(from_child_, chunk, sizeof(chunk));
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) throw TransportError("model process closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(got));
  }
}

std::vector<double> PipeJsonlClient::Call(
    const std::vector<TokenSequence>& batch, int class_index) {
  std::lock_guard<std::mutex> lock(mu_);
  if (pid_ < 0) Start();
  const std::string id = "req-" + std::to_string(++next_id_);
  const std::string line = EncodeRequest(id, class_index, batch).dump() + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(to_child_, line.data() + written,
                              line.size() - written);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      Stop();
      throw TransportError(std::string("writing to model process: ") +
                           std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
  std::string reply;
  try {
    reply = ReadLine();
  } catch (const TransportError&) {
    Stop();  // the stream is out of sync; restart on the next call
    throw;
  }
  nlohmann::json response;
  try {
    response = nlohmann::json::parse(reply);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedResponseError(std::string("response is not JSON: ") +
                                 e.what());
  }
  return DecodeResponse(response, id, batch.size());
}

struct HttpJsonClient::Impl {
  Impl(const std::string& address, std::chrono::milliseconds timeout)
      : client(address) {
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
        timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    client.set_keep_alive(true);
  }
  std::mutex mu;
  httplib::Client client;
  std::size_t next_id = 0;
};

HttpJsonClient::HttpJsonClient(std::string address,
                               std::chrono::milliseconds timeout)
    : impl_(std::make_unique<Impl>(address, timeout)) {}

HttpJsonClient::~HttpJsonClient() = default;

std::vector<double> HttpJsonClient::Call(
    const std::vector<TokenSequence>& batch, int class_index) {
  std::lock_guard<std::mutex> lock(impl_->mu);
  const std::string id = "req-" + std::to_string(++impl_->next_id);
  const std::string body = EncodeRequest(id, class_index, batch).dump();
  auto result = impl_->client.Post("/evaluate", body, "application/json");
  if (!result) {
    const httplib::Error error = result.error();
    const std::string what = "http request failed: " + httplib::to_string(error);
    if (error == httplib::Error::Read ||
        error == httplib::Error::ConnectionTimeout) {
      throw TimeoutError(what);
    }
    throw TransportError(what);
  }
  nlohmann::json response;
  try {
    response = nlohmann::json::parse(result->body);
  } catch (const nlohmann::json::exception&) {
    if (result->status < 200 || result->status >= 300) {
      throw ModelError("http status " + std::to_string(result->status));
    }
    throw MalformedResponseError("response body is not JSON");
  }
  if (result->status < 200 || result->status >= 300) {
    if (response.is_object() && response.contains("error")) {
      return DecodeResponse(response, id, batch.size());  // throws ModelError
    }
    throw ModelError("http status " + std::to_string(result->status));
  }
  return DecodeResponse(response, id, batch.size());
}

std::unique_ptr<ModelClient> MakeClient(const ModelEndpoint& endpoint,
                                        BatchModelFn in_process) {
  endpoint.Validate();
  switch (endpoint.transport) {
    case ModelEndpoint::Transport::kInProcess:
      if (!in_process) {
        throw std::invalid_argument("in_process transport needs a model");
      }
      return std::make_unique<InProcessClient>(std::move(in_process));
    case ModelEndpoint::Transport::kPipeJsonl:
      return std::make_unique<PipeJsonlClient>(endpoint.address,
                                               endpoint.timeout);
    case ModelEndpoint::Transport::kHttpJson:
      return std::make_unique<HttpJsonClient>(endpoint.address,
                                              endpoint.timeout);
  }
  throw std::invalid_argument("unknown transport");
}

}  // namespace ordshap
