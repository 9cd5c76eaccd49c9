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

#include <atomic>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "ordshap/approx.h"
#include "ordshap/exact.h"
#include "ordshap/sampler.h"
#include "ordshap/sequence.h"
#include "ordshap/synthetic_model.h"
#include "wire_handler.h"

namespace ordshap {
namespace {

TokenSequence Words(std::initializer_list<const char*> words) {
  TokenSequence out;
  for (const char* w : words) out.emplace_back(std::string(w));
  return out;
}

SequenceSample Sample(TokenSequence tokens, const char* mask = "[MASK]") {
  SequenceSample sample;
  sample.tokens = std::move(tokens);
  sample.masking.baseline_token = std::string(mask);
  return sample;
}

// Counts calls and sequences seen; answers with EchoValue.
struct CountingModel {
  std::shared_ptr<std::atomic<int>> calls = std::make_shared<std::atomic<int>>(0);
  std::shared_ptr<std::atomic<int>> seen = std::make_shared<std::atomic<int>>(0);

  BatchModelFn Fn() const {
    return [calls = calls, seen = seen](const std::vector<TokenSequence>& batch,
                                        int class_index) {
      ++*calls;
      *seen += static_cast<int>(batch.size());
      std::vector<double> out;
      for (const TokenSequence& s : batch) {
        out.push_back(testing::EchoValue(s, class_index));
      }
      return out;
    };
  }
};

std::shared_ptr<ModelGateway> Gateway(BatchModelFn fn, int batch_limit = 64,
                                      GatewayOptions options = {}) {
  ModelEndpoint endpoint;
  endpoint.batch_limit = batch_limit;
  return std::make_shared<ModelGateway>(
      endpoint, std::make_unique<InProcessClient>(std::move(fn)), options);
}

TEST(MaterializeTest, Examples) {
  const TokenSequence x = Words({"a", "b", "c"});
  const TokenSequence blank = Words({"_", "_", "_"});
  EXPECT_EQ(Materialize(x, Subset::Full(3), Permutation::Identity(3), blank), x);
  EXPECT_EQ(Materialize(x, Subset(3), Permutation({2, 1, 3}), blank), blank);
  EXPECT_EQ(Materialize(x, Subset(3, {2}), Permutation({2, 1, 3}), blank),
            Words({"b", "_", "_"}));
  EXPECT_THROW(Materialize(x, Subset(3), Permutation::Identity(3),
                           Words({"_"})),
               std::invalid_argument);
}

TEST(MaterializeTest, PlacementLaw) {
  SeededSampler sampler(2025);
  for (int draw = 0; draw < 1000; ++draw) {
    const int n = sampler.UniformInt(1, 8);
    TokenSequence x, ref;
    for (int i = 1; i <= n; ++i) {
      x.emplace_back("x" + std::to_string(i));
      ref.emplace_back("r" + std::to_string(i));
    }
    const Subset s = Subset::FromMask(
        n, static_cast<std::uint64_t>(sampler.UniformInt(0, (1 << n) - 1)));
    const Permutation sigma = sampler.SamplePermutation(n);
    const TokenSequence out = Materialize(x, s, sigma, ref);
    for (int i = 1; i <= n; ++i) {
      ASSERT_EQ(out[sigma.PositionOf(i) - 1], s.Contains(i) ? x[i - 1]
                                                            : ref[i - 1]);
    }
  }
}

TEST(SequenceSampleTest, ValidationAndJson) {
  SequenceSample sample = Sample(Words({"a", "b", "c"}));
  sample.groups = std::vector<int>{1, 1, 2};
  EXPECT_NO_THROW(sample.Validate());
  const SequenceSample back = SequenceSample::FromJson(sample.ToJson());
  EXPECT_EQ(back.ToJson(), sample.ToJson());
  EXPECT_EQ(GroupedPositions(back), PositionGrouping({1, 1, 2}));

  sample.groups = std::vector<int>{2, 1, 1};
  EXPECT_THROW(sample.Validate(), std::invalid_argument);
  sample.groups = std::vector<int>{1, 1};
  EXPECT_THROW(sample.Validate(), std::invalid_argument);
  EXPECT_THROW(Sample({}).Validate(), std::invalid_argument);

  SequenceSample refs = Sample(Words({"a", "b"}));
  refs.masking.mode = MaskingPolicy::Mode::kReferenceSet;
  refs.masking.references = {Words({"p", "q"}), Words({"r"})};
  EXPECT_THROW(refs.Validate(), std::invalid_argument);

  const SequenceSample parsed = SequenceSample::FromJson(
      nlohmann::json::parse(R"({"tokens": ["x", [1.0, 2.0]], "baseline": "<pad>"})"));
  EXPECT_EQ(parsed.size(), 2);
  EXPECT_EQ(parsed.ReferenceSequences().front(), Words({"<pad>", "<pad>"}));
  EXPECT_THROW(SequenceSample::FromJson(nlohmann::json::parse(R"({"tokens": [3]})")),
               std::invalid_argument);
}

TEST(EvalCacheTest, HitsMissesCapacity) {
  EvalCache cache(2);
  EXPECT_FALSE(cache.Lookup("a"));
  cache.Insert("a", 1.0);
  cache.Insert("b", 2.0);
  cache.Insert("c", 3.0);
  EXPECT_EQ(cache.size(), 2u);
  EXPECT_EQ(cache.Lookup("a"), 1.0);
  EXPECT_FALSE(cache.Lookup("c"));
  EXPECT_EQ(cache.hits(), 1);
  EXPECT_EQ(cache.misses(), 2);
}

TEST(ModelGatewayTest, EvaluateBatchChunks) {
  CountingModel model;
  auto gateway = Gateway(model.Fn(), 64);
  std::vector<TokenSequence> seqs;
  for (int k = 0; k < 1000; ++k) seqs.push_back(Words({"t"}));
  for (int k = 0; k < 1000; ++k) seqs[k][0] = std::string("t") + std::to_string(k);
  const std::vector<double> out = gateway->EvaluateBatch(seqs, 0);
  EXPECT_EQ(*model.calls, 16);
  EXPECT_EQ(gateway->stats().round_trips, 16);
  for (int k = 0; k < 1000; ++k) {
    ASSERT_EQ(out[k], testing::EchoValue(seqs[k], 0));
  }
  EXPECT_TRUE(gateway->EvaluateBatch({}, 0).empty());
  EXPECT_EQ(*model.calls, 16);
  EXPECT_EQ(gateway->EvaluateBatch({seqs[3]}, 0)[0], out[3]);
}

TEST(ModelGatewayTest, DeduplicatesAndCaches) {
  CountingModel model;
  auto gateway = Gateway(model.Fn());
  const TokenSequence a = Words({"a", "[MASK]"});
  const TokenSequence b = Words({"[MASK]", "b"});
  const std::vector<double> first = gateway->Evaluate({a, a}, 0);
  EXPECT_EQ(first[0], first[1]);
  EXPECT_EQ(*model.seen, 1);
  EXPECT_EQ(gateway->stats().cache_hits, 1);

  const std::vector<double> second = gateway->Evaluate({b, a, b}, 0);
  EXPECT_EQ(second[1], first[0]);
  EXPECT_EQ(*model.seen, 2);
  EXPECT_EQ(gateway->stats().cache_hits, 3);
  // A different class is a different key.
  gateway->Evaluate({a}, 1);
  EXPECT_EQ(*model.seen, 3);
}

TEST(ModelGatewayTest, CacheOffSendsEverything) {
  CountingModel model;
  GatewayOptions options;
  options.use_cache = false;
  auto gateway = Gateway(model.Fn(), 64, options);
  const TokenSequence a = Words({"a"});
  gateway->Evaluate({a, a, a}, 0);
  EXPECT_EQ(*model.seen, 3);
  EXPECT_EQ(gateway->stats().cache_hits, 0);
}

TEST(ModelGatewayTest, FailingChunkIsReported) {
  auto fail_on_poison = [](const std::vector<TokenSequence>& batch, int) {
    for (const TokenSequence& s : batch) {
      if (std::get<std::string>(s[0]) == "poison") {
        throw ModelError("cannot score poison");
      }
    }
    return std::vector<double>(batch.size(), 0.0);
  };
  std::vector<TokenSequence> seqs;
  for (int k = 0; k < 10; ++k) seqs.push_back(Words({"ok"}));
  for (int k = 0; k < 10; ++k) seqs[k][0] = "ok" + std::to_string(k);
  seqs[7][0] = std::string("poison");
  for (int jobs : {1, 3}) {
    GatewayOptions options;
    options.jobs = jobs;
    auto gateway = Gateway(fail_on_poison, 3, options);
    try {
      gateway->EvaluateBatch(seqs, 0);
      FAIL() << "expected BatchError";
    } catch (const BatchError& e) {
      EXPECT_EQ(e.failing_index(), 6u);
    }
    try {
      gateway->Evaluate(seqs, 0);
      FAIL() << "expected BatchError";
    } catch (const BatchError& e) {
      EXPECT_EQ(e.failing_index(), 6u);
    }
  }
}

TEST(ModelGatewayTest, ConcurrentCallersShareOneModelCall) {
  std::atomic<int> seen{0};
  auto slow = [&seen](const std::vector<TokenSequence>& batch, int c) {
    seen += static_cast<int>(batch.size());
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    std::vector<double> out;
    for (const TokenSequence& s : batch) out.push_back(testing::EchoValue(s, c));
    return out;
  };
  auto gateway = Gateway(slow);
  const std::vector<TokenSequence> seqs = {Words({"x", "y"}), Words({"y", "x"})};
  std::vector<std::vector<double>> results(8);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] { results[t] = gateway->Evaluate(seqs, 0); });
  }
  for (std::thread& t : threads) t.join();
  EXPECT_EQ(seen.load(), 2);
  for (const auto& r : results) EXPECT_EQ(r, results[0]);
}

TEST(ModelGameTest, MatchesDirectModelCalls) {
  auto model = std::make_shared<const SyntheticTokenModel>(
      SyntheticModelConfig::Default());
  const std::vector<std::string> words{"A", "C", "Bbar", "D", "Abar",
                                       "B", "Cbar", "A", "C", "D"};
  const SequenceSample sample = MakeSyntheticSample(words, *model);
  auto gateway = Gateway(AsBatchModel(model));
  const ModelGame game(gateway, sample, 1);
  EXPECT_EQ(game.num_players(), 10);
  EXPECT_EQ(game.Evaluate(Subset::Full(10), Permutation::Identity(10)),
            model->ClassScore(words, 1));
  // Fixing the order to the identity gives the classical masked set game.
  std::vector<std::string> masked = words;
  masked[1] = masked[4] = "[MASK]";
  EXPECT_EQ(game.Evaluate(Subset(10, {1, 3, 4, 6, 7, 8, 9, 10}),
                          Permutation::Identity(10)),
            model->ClassScore(masked, 1));
  // Two identical queries make one model call.
  const Subset s(10, {2, 5});
  const Permutation sigma{3, 1, 2, 4, 5, 6, 7, 8, 9, 10};
  const std::int64_t before = gateway->stats().sequences_sent;
  const std::int64_t hits = gateway->stats().cache_hits;
  game.EvaluateMany(std::vector<GameQuery>{{s, sigma}, {s, sigma}});
  EXPECT_EQ(gateway->stats().sequences_sent - before, 1);
  EXPECT_EQ(gateway->stats().cache_hits - hits, 1);
}

TEST(ModelGameTest, ReferenceSetAverages) {
  auto fn = [](const std::vector<TokenSequence>& batch, int) {
    std::vector<double> out;
    for (const TokenSequence& s : batch) {
      double v = 0.0;
      for (const Token& t : s) v += std::get<std::vector<double>>(t)[0];
      out.push_back(v);
    }
    return out;
  };
  SequenceSample sample;
  sample.tokens = {std::vector<double>{1.0}, std::vector<double>{2.0}};
  sample.masking.mode = MaskingPolicy::Mode::kReferenceSet;
  sample.masking.references = {
      {std::vector<double>{0.0}, std::vector<double>{0.0}},
      {std::vector<double>{10.0}, std::vector<double>{20.0}}};
  const ModelGame game(Gateway(fn), sample);
  EXPECT_DOUBLE_EQ(game.Evaluate(Subset(2, {1}), Permutation::Identity(2)),
                   0.5 * (1.0 + 0.0) + 0.5 * (1.0 + 20.0));
}

TEST(ModelGameTest, CacheDoesNotChangeAttributions) {
  auto model = std::make_shared<const SyntheticTokenModel>(
      SyntheticModelConfig::Default());
  const SequenceSample sample = MakeSyntheticSample(
      {"A", "B", "C", "D", "Abar", "Bbar", "Cbar", "A", "B", "C"}, *model);
  GatewayOptions off;
  off.use_cache = false;
  const ModelGame cached(Gateway(AsBatchModel(model)), sample, 1);
  const ModelGame uncached(Gateway(AsBatchModel(model), 64, off), sample, 1);
  LeastSquaresConfig ls;
  ls.K = 64;
  ls.L = 4;
  const AttributionResult a = LeastSquaresEstimate(cached, ls);
  const AttributionResult b = LeastSquaresEstimate(uncached, ls);
  for (int i = 0; i < 10; ++i) {
    EXPECT_NEAR(a.vi[i], b.vi[i], 1e-12);
    EXPECT_NEAR(a.pi[i], b.pi[i], 1e-12);
  }
  const AttributionResult c = SamplingEstimate(cached, {8, 8, 1});
  const AttributionResult d = SamplingEstimate(uncached, {8, 8, 1});
  EXPECT_EQ(c.ToJson().dump(), d.ToJson().dump());
}

TEST(ModelGameTest, GroupedIdentityAndWithinGroupRelabelling) {
  auto model = std::make_shared<const SyntheticTokenModel>([] {
    SyntheticModelConfig config = SyntheticModelConfig::Default();
    config.sequence_length = 5;
    return config;
  }());
  const std::vector<std::string> words{"A", "Bbar", "C", "B", "Abar"};
  SequenceSample sample = MakeSyntheticSample(words, *model);
  const ModelGame game(Gateway(AsBatchModel(model)), sample, 1);
  const OrdShapMatrix plain = OrdShapExact(game);
  const OrdShapMatrix identity =
      OrdShapExact(game, PositionGrouping::Identity(5));
  for (int i = 1; i <= 5; ++i) {
    for (int l = 1; l <= 5; ++l) EXPECT_EQ(plain.at(i, l), identity.at(i, l));
  }

  // Swapping tokens 1 and 2 inside group {1, 2} swaps rows 1 and 2 only.
  const PositionGrouping groups({1, 1, 2, 3, 3});
  const OrdShapMatrix grouped = OrdShapExact(game, groups);
  SequenceSample swapped =
      MakeSyntheticSample({"Bbar", "A", "C", "B", "Abar"}, *model);
  swapped.groups = groups.labels();
  const ModelGame swapped_game(Gateway(AsBatchModel(model)), swapped, 1);
  const OrdShapMatrix after = OrdShapExact(swapped_game, groups);
  const std::vector<int> source{2, 1, 3, 4, 5};
  for (int i = 1; i <= 5; ++i) {
    for (int c = 1; c <= 3; ++c) {
      EXPECT_NEAR(after.at(i, c), grouped.at(source[i - 1], c), 1e-15);
    }
  }
}

TEST(ModelGameTest, IrregularGroupsGiveOneColumnPerLabel) {
  auto model = std::make_shared<const SyntheticTokenModel>([] {
    SyntheticModelConfig config = SyntheticModelConfig::Default();
    config.sequence_length = 9;
    return config;
  }());
  SequenceSample sample = MakeSyntheticSample(
      {"A", "B", "C", "D", "Abar", "Bbar", "Cbar", "A", "B"}, *model);
  sample.groups = std::vector<int>{1, 1, 1, 3, 3, 3, 9, 9, 9};
  const ModelGame game(Gateway(AsBatchModel(model)), sample, 1);
  const AttributionResult result =
      SamplingEstimate(game, {8, 32, 4}, GroupedPositions(sample));
  ASSERT_TRUE(result.gamma.has_value());
  EXPECT_EQ(result.gamma->num_columns(), 3);
  EXPECT_EQ(result.gamma->grouping().column_labels(),
            (std::vector<int>{1, 3, 9}));
}

}  // namespace
}  // namespace ordshap
