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

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "httplib.h"
#include "wire_handler.h"

namespace ordshap {
namespace {

using namespace std::chrono_literals;

std::string Fixture(const std::string& name) {
  std::ifstream in(std::string(ORDSHAP_FIXTURE_DIR) + "/wire/" + name);
  EXPECT_TRUE(in) << name;
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  while (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

std::string Stub(const std::string& mode) {
  return std::string(ORDSHAP_WIRE_STUB) + " " + mode;
}

const std::vector<TokenSequence> kTokens = {
    {std::string("A"), std::string("[MASK]"), std::string("C")},
    {std::string("[MASK]"), std::string("B"), std::string("[MASK]")}};

TEST(WireCodecTest, RequestsMatchFixtures) {
  EXPECT_EQ(EncodeRequest("req-1", 1, kTokens).dump(),
            Fixture("request_tokens.json"));
  const std::vector<TokenSequence> embeddings = {
      {std::vector<double>{0.5, -1.25}, std::vector<double>{0.0, 2.0}}};
  EXPECT_EQ(EncodeRequest("req-7", 0, embeddings).dump(),
            Fixture("request_embeddings.json"));
  EXPECT_EQ(EncodeRequest("req-2", 0, {}).dump(),
            Fixture("request_empty.json"));
}

TEST(WireCodecTest, ResponsesDecode) {
  auto parse = [](const std::string& name) {
    return nlohmann::json::parse(Fixture(name));
  };
  EXPECT_EQ(DecodeResponse(parse("response_ok.json"), "req-1", 2),
            (std::vector<double>{0.25, 0.75}));
  EXPECT_THROW(DecodeResponse(parse("response_error.json"), "req-1", 2),
               ModelError);
  EXPECT_THROW(DecodeResponse(parse("response_short.json"), "req-1", 2),
               MalformedResponseError);
  EXPECT_THROW(DecodeResponse(parse("response_wrong_id.json"), "req-1", 2),
               MalformedResponseError);
  EXPECT_THROW(DecodeResponse(parse("response_non_numeric.json"), "req-1", 2),
               MalformedResponseError);
  EXPECT_THROW(
      DecodeResponse(parse("response_missing_outputs.json"), "req-1", 2),
      MalformedResponseError);
}

TEST(WireCodecTest, ServerSideHandlerAcceptsFixtures) {
  const nlohmann::json reply = nlohmann::json::parse(
      testing::HandleRequest(Fixture("request_tokens.json"), "echo"));
  EXPECT_EQ(reply.at("id"), "req-1");
  ASSERT_EQ(reply.at("outputs").size(), 2u);
  EXPECT_EQ(reply.at("outputs")[0].get<double>(),
            testing::EchoValue(kTokens[0], 1));
  const nlohmann::json limited = nlohmann::json::parse(
      testing::HandleRequest(Fixture("request_tokens.json"), "echo", 1));
  EXPECT_NE(limited.at("error").get<std::string>().find("batch_limit"),
            std::string::npos);
}

TEST(EndpointTest, Validation) {
  EXPECT_EQ(ParseTransport("pipe_jsonl"), ModelEndpoint::Transport::kPipeJsonl);
  EXPECT_EQ(ParseTransport("http_json"), ModelEndpoint::Transport::kHttpJson);
  EXPECT_EQ(ParseTransport("in_process"),
            ModelEndpoint::Transport::kInProcess);
  EXPECT_THROW(ParseTransport("carrier_pigeon"), std::invalid_argument);
  ModelEndpoint endpoint;
  endpoint.batch_limit = 0;
  EXPECT_THROW(endpoint.Validate(), std::invalid_argument);
  endpoint.batch_limit = 4;
  endpoint.transport = ModelEndpoint::Transport::kHttpJson;
  EXPECT_THROW(endpoint.Validate(), std::invalid_argument);
  endpoint.address = "http://127.0.0.1:1";
  EXPECT_NO_THROW(endpoint.Validate());
  EXPECT_THROW(MakeClient(ModelEndpoint{}), std::invalid_argument);
}

TEST(PipeJsonlClientTest, EchoRoundTrips) {
  PipeJsonlClient client(Stub("echo"), 5000ms);
  for (int round = 0; round < 3; ++round) {
    const std::vector<double> out = client.Call(kTokens, round);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0], testing::EchoValue(kTokens[0], round));
    EXPECT_EQ(out[1], testing::EchoValue(kTokens[1], round));
  }
  EXPECT_TRUE(client.Call({}, 0).empty());
}

TEST(PipeJsonlClientTest, FailuresAreDistinct) {
  PipeJsonlClient error(Stub("error"), 5000ms);
  EXPECT_THROW(error.Call(kTokens, 0), ModelError);
  PipeJsonlClient garbage(Stub("garbage"), 5000ms);
  EXPECT_THROW(garbage.Call(kTokens, 0), MalformedResponseError);
  PipeJsonlClient shorter(Stub("short"), 5000ms);
  EXPECT_THROW(shorter.Call(kTokens, 0), MalformedResponseError);
  PipeJsonlClient wrong_id(Stub("wrong-id"), 5000ms);
  EXPECT_THROW(wrong_id.Call(kTokens, 0), MalformedResponseError);
  PipeJsonlClient hang(Stub("hang"), 200ms);
  EXPECT_THROW(hang.Call(kTokens, 0), TimeoutError);
  PipeJsonlClient dies(Stub("exit"), 5000ms);
  try {
    dies.Call(kTokens, 0);
    FAIL() << "expected TransportError";
  } catch (const TimeoutError&) {
    FAIL() << "a dead process is not a timeout";
  } catch (const TransportError&) {
  }
  // The client restarts the process on the next call.
  EXPECT_THROW(dies.Call(kTokens, 0), TransportError);
}

TEST(PipeJsonlClientTest, MissingProgramIsATransportError) {
  PipeJsonlClient client("/nonexistent/model-server", 2000ms);
  EXPECT_THROW(client.Call(kTokens, 0), TransportError);
}

class HttpServer {
 public:
  explicit HttpServer(std::string mode) {
    server_.Post("/evaluate", [mode](const httplib::Request& req,
                                     httplib::Response& res) {
      if (mode == "status") {
        res.status = 503;
        res.set_content("unavailable", "text/plain");
        return;
      }
      if (mode == "slow") std::this_thread::sleep_for(1500ms);
      const std::string body = testing::HandleRequest(req.body, mode);
      res.status = body.find("\"error\"") != std::string::npos ? 500 : 200;
      res.set_content(body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~HttpServer() {
    server_.stop();
    thread_.join();
  }
  std::string address() const {
    return "http://127.0.0.1:" + std::to_string(port_);
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(HttpJsonClientTest, EchoRoundTrips) {
  HttpServer server("echo");
  HttpJsonClient client(server.address(), 5000ms);
  for (int round = 0; round < 3; ++round) {
    const std::vector<double> out = client.Call(kTokens, round);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[1], testing::EchoValue(kTokens[1], round));
  }
}

TEST(HttpJsonClientTest, FailuresAreDistinct) {
  {
    HttpServer server("error");
    HttpJsonClient client(server.address(), 5000ms);
    EXPECT_THROW(client.Call(kTokens, 0), ModelError);
  }
  {
    HttpServer server("status");
    HttpJsonClient client(server.address(), 5000ms);
    EXPECT_THROW(client.Call(kTokens, 0), ModelError);
  }
  {
    HttpServer server("garbage");
    HttpJsonClient client(server.address(), 5000ms);
    EXPECT_THROW(client.Call(kTokens, 0), MalformedResponseError);
  }
  {
    HttpServer server("slow");
    HttpJsonClient client(server.address(), 300ms);
    EXPECT_THROW(client.Call(kTokens, 0), TimeoutError);
  }
  HttpJsonClient nobody("http://127.0.0.1:1", 1000ms);
  EXPECT_THROW(nobody.Call(kTokens, 0), TransportError);
}

TEST(MakeClientTest, BuildsEachTransport) {
  ModelEndpoint endpoint;
  auto in_process = MakeClient(endpoint, [](const auto& batch, int) {
    return std::vector<double>(batch.size(), 1.5);
  });
  EXPECT_EQ(in_process->Call(kTokens, 0), (std::vector<double>{1.5, 1.5}));

  endpoint.transport = ModelEndpoint::Transport::kPipeJsonl;
  endpoint.address = Stub("echo");
  EXPECT_EQ(MakeClient(endpoint)->Call(kTokens, 2)[0],
            testing::EchoValue(kTokens[0], 2));

  HttpServer server("echo");
  endpoint.transport = ModelEndpoint::Transport::kHttpJson;
  endpoint.address = server.address();
  EXPECT_EQ(MakeClient(endpoint)->Call(kTokens, 2)[0],
            testing::EchoValue(kTokens[0], 2));
}

}  // namespace
}  // namespace ordshap
