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


#include "cli.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "ordshap/attribution.h"

namespace ordshap::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("ordshap_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv(kEndpointEnv);
  }
  void TearDown() override {
    fs::remove_all(dir_);
    unsetenv(kEndpointEnv);
  }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  static json Load(const std::string& path) {
    std::ifstream in(path);
    return json::parse(in);
  }

  static std::string Slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"explain", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(Cli({"explain", "--game", "toy", "--method", "magic"}).code,
            kExitUsage);
  EXPECT_EQ(Cli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, MissingEndpointIsUsageError) {
  std::ofstream(Path("s.json")) << R"({"tokens": ["a", "b", "c"]})";
  const Outcome o = Cli({"explain", "--sample", Path("s.json")});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find("endpoint"), std::string::npos);
}

TEST_F(CliTest, ToyExactExplain) {
  const Outcome o = Cli({"explain", "--game", "toy", "--method", "exact",
                         "--out", Path("toy")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const json j = Load(Path("toy/attribution.json"));
  const AttributionResult r = AttributionResult::FromJson(j);
  ASSERT_EQ(r.vi.size(), 6u);
  EXPECT_NEAR(r.vi[0], 0.75, 1e-12);
  EXPECT_NEAR(r.vi[3], 2.25, 1e-12);
  EXPECT_NEAR(r.pi[0], 0.3, 1e-12);
  EXPECT_NEAR(r.pi[3], -0.9, 1e-12);
  ASSERT_TRUE(r.gamma.has_value());
  EXPECT_TRUE(fs::exists(Path("toy/gamma.csv")));
  EXPECT_EQ(Slurp(Path("toy/attribution.csv")).substr(0, 19),
            "feature,token,vi,pi");

  // Lossless round trip.
  json again = r.ToJson();
  for (const char* key : {"vi", "pi", "gamma"}) EXPECT_EQ(again[key], j[key]);
  EXPECT_EQ(j["manifest"]["command"], "explain");
}

TEST_F(CliTest, ExactWritesConsistentOracleOutputs) {
  const Outcome o = Cli({"exact", "--game", "toy", "--out", Path("x")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const json j = Load(Path("x/exact.json"));
  const auto vi = j["vi"].get<std::vector<double>>();
  for (std::size_t i = 0; i < vi.size(); ++i) {
    double mean = 0.0;
    for (const json& v : j["gamma"][i]) mean += v.get<double>() / 6.0;
    EXPECT_NEAR(vi[i], mean, 1e-12);
    EXPECT_EQ(j["shapley"][i].get<double>(), 0.0);
    EXPECT_NEAR(j["sanchez_bergantinos"][i].get<double>(), vi[i], 1e-12);
  }
  EXPECT_TRUE(fs::exists(Path("x/exact.csv")));
}

TEST_F(CliTest, ExactGuardNamesTheBound) {
  const Outcome o = Cli({"exact", "--game", "synthetic", "--out", Path("g")});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find("n <= 6"), std::string::npos) << o.err;
}

TEST_F(CliTest, SyntheticLeastSquaresIsDeterministic) {
  const std::vector<std::string> args{"explain", "--game", "synthetic",
                                      "--method", "ls", "--K", "256", "--L",
                                      "8", "--seed", "3"};
  std::vector<std::string> a = args, b = args;
  a.insert(a.end(), {"--out", Path("a")});
  b.insert(b.end(), {"--out", Path("b")});
  ASSERT_EQ(Cli(a).code, kExitOk);
  ASSERT_EQ(Cli(b).code, kExitOk);
  const json ja = Load(Path("a/attribution.json"));
  const json jb = Load(Path("b/attribution.json"));
  EXPECT_EQ(ja["vi"].size(), 10u);
  EXPECT_EQ(ja["vi"], jb["vi"]);
  EXPECT_EQ(ja["pi"], jb["pi"]);
  EXPECT_EQ(Slurp(Path("a/attribution.csv")), Slurp(Path("b/attribution.csv")));

  const json& m = ja["manifest"];
  for (const char* key : {"method", "K", "L", "class_index", "groups",
                          "baseline", "batch_limit", "synthetic_model"}) {
    EXPECT_TRUE(m["config"].contains(key)) << key;
  }
  EXPECT_EQ(m["seed"], 3);
  EXPECT_GT(m["model_calls"].get<int>(), 0);
  EXPECT_FALSE(ja.contains("gamma"));
}

TEST_F(CliTest, PipeModelMatchesInProcess) {
  ASSERT_EQ(Cli({"synth", "--count", "2", "--out", Path("d")}).code, kExitOk);
  const std::vector<std::string> common{
      "explain", "--sample", Path("d/samples.json"), "--sample-index", "1",
      "--class-index", "1", "--method", "ls", "--K", "64", "--L", "2",
      "--seed", "9"};
  std::vector<std::string> local = common;
  local.insert(local.end(), {"--game", "synthetic", "--out", Path("local")});
  ASSERT_EQ(Cli(local).code, kExitOk);

  std::vector<std::string> remote = common;
  remote.insert(remote.end(),
                {"--endpoint", std::string(ORDSHAP_WIRE_STUB) + " synthetic",
                 "--batch-limit", "50", "--out", Path("remote")});
  const Outcome o = Cli(remote);
  ASSERT_EQ(o.code, kExitOk) << o.err;

  // The endpoint may also come from the environment.
  setenv(kEndpointEnv, (std::string(ORDSHAP_WIRE_STUB) + " synthetic").c_str(),
         1);
  std::vector<std::string> env = common;
  env.insert(env.end(), {"--out", Path("env")});
  ASSERT_EQ(Cli(env).code, kExitOk);

  const json a = Load(Path("local/attribution.json"));
  for (const char* other : {"remote", "env"}) {
    const json b = Load(Path(std::string(other) + "/attribution.json"));
    for (std::size_t i = 0; i < 10; ++i) {
      EXPECT_NEAR(a["vi"][i].get<double>(), b["vi"][i].get<double>(), 1e-12);
      EXPECT_NEAR(a["pi"][i].get<double>(), b["pi"][i].get<double>(), 1e-12);
    }
  }
}

TEST_F(CliTest, ModelErrorsExitOne) {
  std::ofstream(Path("s.json")) << R"({"tokens": ["A", "B", "C"]})";
  const Outcome o =
      Cli({"explain", "--sample", Path("s.json"), "--endpoint",
           std::string(ORDSHAP_WIRE_STUB) + " error", "--out", Path("e")});
  EXPECT_EQ(o.code, kExitRuntime);
  EXPECT_FALSE(o.err.empty());
}

TEST_F(CliTest, SynthDefaults) {
  ASSERT_EQ(Cli({"synth", "--out", Path("s")}).code, kExitOk);
  const json samples = Load(Path("s/samples.json"));
  ASSERT_EQ(samples.size(), 200u);
  for (const json& s : samples) EXPECT_EQ(s["tokens"].size(), 10u);
  EXPECT_EQ(Load(Path("s/model_config.json"))["tokens"].size(), 7u);
  EXPECT_EQ(Load(Path("s/manifest.json"))["command"], "synth");
}

TEST_F(CliTest, EvaluateWritesCurvesAndIsDeterministic) {
  ASSERT_EQ(Cli({"synth", "--count", "3", "--length", "5", "--seed", "4",
                 "--out", Path("d")})
                .code,
            kExitOk);
  json attributions = json::array();
  for (int k = 0; k < 3; ++k) {
    const std::string out = Path("x" + std::to_string(k));
    ASSERT_EQ(Cli({"exact", "--game", "synthetic", "--sample",
                   Path("d/samples.json"), "--sample-index", std::to_string(k),
                   "--out", out})
                  .code,
              kExitOk);
    attributions.push_back(Load(out + "/exact.json"));
  }
  std::ofstream(Path("attr.json")) << attributions.dump();

  const std::vector<std::string> base{
      "evaluate", "--game", "synthetic", "--samples", Path("d/samples.json"),
      "--attributions", Path("attr.json"), "--permutations", "10", "--seed",
      "2"};
  std::vector<std::string> first = base, second = base;
  first.insert(first.end(), {"--out", Path("m1")});
  second.insert(second.end(), {"--out", Path("m2")});
  const Outcome o = Cli(first);
  ASSERT_EQ(o.code, kExitOk) << o.err;
  ASSERT_EQ(Cli(second).code, kExitOk);
  for (const char* m : {"pi", "inc", "exc", "ins", "del"}) {
    const std::string csv = "metric_" + std::string(m) + ".csv";
    ASSERT_TRUE(fs::exists(Path("m1/" + csv))) << m;
    EXPECT_EQ(Slurp(Path("m1/" + csv)), Slurp(Path("m2/" + csv))) << m;
  }
  const json s = Load(Path("m1/summary.json"));
  EXPECT_EQ(s["auc"], Load(Path("m2/summary.json"))["auc"]);
  EXPECT_EQ(s["manifest"]["config"]["metric"]["permutations_per_k"], 10);

  std::vector<std::string> only_inc = base;
  only_inc.insert(only_inc.end(), {"--metric", "inc", "--out", Path("m3")});
  ASSERT_EQ(Cli(only_inc).code, kExitOk);
  EXPECT_TRUE(fs::exists(Path("m3/metric_inc.csv")));
  EXPECT_FALSE(fs::exists(Path("m3/metric_del.csv")));
}

TEST_F(CliTest, EvaluateRejectsMisalignedInputs) {
  ASSERT_EQ(Cli({"synth", "--count", "2", "--length", "4", "--out", Path("d")})
                .code,
            kExitOk);
  std::ofstream(Path("attr.json"))
      << R"([{"vi": [0, 0, 0, 0], "pi": [0, 0, 0, 0]}])";
  const Outcome o =
      Cli({"evaluate", "--game", "synthetic", "--samples",
           Path("d/samples.json"), "--attributions", Path("attr.json"),
           "--out", Path("m")});
  EXPECT_EQ(o.code, kExitUsage);
}

}  // namespace
}  // namespace ordshap::cli
