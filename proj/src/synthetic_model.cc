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

#include "ordshap/synthetic_model.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ordshap {

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

SyntheticModelConfig SyntheticModelConfig::Default() {
  SyntheticModelConfig config;
  // Small magnitudes keep the sigmoid close to its linear range.
  config.tokens = {
      {"A", 0.1, 0.005},     {"B", 0.2, 0.01},      {"C", 0.15, 0.0},
      {"D", 0.0, 0.0},       {"Abar", -0.1, -0.005}, {"Bbar", -0.2, -0.01},
      {"Cbar", -0.15, 0.0},
  };
  config.link = Link::kSigmoid;
  config.sequence_length = 10;
  return config;
}

nlohmann::json SyntheticModelConfig::ToJson() const {
  nlohmann::json tokens_json = nlohmann::json::array();
  for (const TokenValue& t : tokens) {
    tokens_json.push_back(
        {{"token", t.token}, {"intercept", t.intercept}, {"slope", t.slope}});
  }
  return {{"tokens", tokens_json},
          {"link", link == Link::kLinear ? "linear" : "sigmoid"},
          {"sequence_length", sequence_length},
          {"mask_token", mask_token},
          {"seed", seed}};
}

SyntheticModelConfig SyntheticModelConfig::FromJson(const nlohmann::json& j) {
  SyntheticModelConfig config;
  try {
    for (const auto& t : j.at("tokens")) {
      config.tokens.push_back({t.at("token").get<std::string>(),
                               t.value("intercept", 0.0),
                               t.value("slope", 0.0)});
    }
    const std::string link = j.value("link", std::string("sigmoid"));
    if (link == "linear") {
      config.link = Link::kLinear;
    } else if (link == "sigmoid") {
      config.link = Link::kSigmoid;
    } else {
      throw std::invalid_argument("link must be 'linear' or 'sigmoid', got '" +
                                  link + "'");
    }
    config.sequence_length = j.value("sequence_length", 10);
    config.mask_token = j.value("mask_token", std::string("[MASK]"));
    config.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad synthetic model config: ") +
                                e.what());
  }
  return config;
}

SyntheticTokenModel::SyntheticTokenModel(SyntheticModelConfig config)
    : config_(std::move(config)),
      mean_position_((config_.sequence_length + 1) / 2.0) {
  if (config_.tokens.empty()) {
    throw std::invalid_argument("synthetic model needs a non-empty alphabet");
  }
  if (config_.sequence_length < 1) {
    throw std::invalid_argument("sequence length must be >= 1");
  }
  std::set<std::string> seen;
  for (const TokenValue& t : config_.tokens) {
    if (!seen.insert(t.token).second) {
      throw std::invalid_argument("duplicate token '" + t.token + "'");
    }
  }
  if (seen.count(config_.mask_token)) {
    throw std::invalid_argument("mask token collides with the alphabet");
  }
}

std::vector<std::string> SyntheticTokenModel::Alphabet() const {
  std::vector<std::string> out;
  for (const TokenValue& t : config_.tokens) out.push_back(t.token);
  return out;
}

const TokenValue& SyntheticTokenModel::ValueOf(const std::string& token) const {
  for (const TokenValue& t : config_.tokens) {
    if (t.token == token) return t;
  }
  throw std::invalid_argument("token '" + token + "' not in alphabet");
}

bool SyntheticTokenModel::IsPositional(const std::string& token) const {
  return ValueOf(token).slope != 0.0;
}

double SyntheticTokenModel::Contribution(const std::string& token,
                                         int position) const {
  if (token == config_.mask_token) return 0.0;
  const TokenValue& v = ValueOf(token);
  return v.intercept + v.slope * (position - mean_position_);
}

double SyntheticTokenModel::LinearScore(
    std::span<const std::string> tokens) const {
  if (static_cast<int>(tokens.size()) != config_.sequence_length) {
    throw std::invalid_argument(
        "expected " + std::to_string(config_.sequence_length) +
        " tokens, got " + std::to_string(tokens.size()));
  }
  double score = 0.0;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    score += Contribution(tokens[k], static_cast<int>(k) + 1);
  }
  return score;
}

double SyntheticTokenModel::Output(std::span<const std::string> tokens) const {
  const double score = LinearScore(tokens);
  return config_.link == Link::kLinear ? score : Sigmoid(score);
}

double SyntheticTokenModel::ClassScore(std::span<const std::string> tokens,
                                       int class_index) const {
  if (class_index < 0 || class_index >= num_classes()) {
    throw std::invalid_argument("class index " + std::to_string(class_index) +
                                " outside [0, " +
                                std::to_string(num_classes()) + ")");
  }
  const double out = Output(tokens);
  if (config_.link == Link::kLinear) return out;
  return class_index == 1 ? out : 1.0 - out;
}

std::vector<std::vector<std::string>> GenerateSyntheticDataset(
    SeededSampler& sampler, int count, const SyntheticTokenModel& model) {
  if (count < 1) throw std::invalid_argument("dataset count must be >= 1");
  const std::vector<std::string> alphabet = model.Alphabet();
  const int last = static_cast<int>(alphabet.size()) - 1;
  std::vector<std::vector<std::string>> out(count);
  for (auto& sequence : out) {
    sequence.reserve(model.sequence_length());
    for (int k = 0; k < model.sequence_length(); ++k) {
      sequence.push_back(alphabet[sampler.UniformInt(0, last)]);
    }
  }
  return out;
}

BatchModelFn AsBatchModel(std::shared_ptr<const SyntheticTokenModel> model) {
  return [model](const std::vector<TokenSequence>& batch, int class_index) {
    std::vector<double> out;
    out.reserve(batch.size());
    std::vector<std::string> words;
    for (const TokenSequence& sequence : batch) {
      words.clear();
      for (const Token& token : sequence) {
        const auto* word = std::get_if<std::string>(&token);
        if (word == nullptr) {
          throw std::invalid_argument(
              "synthetic model expects string tokens");
        }
        words.push_back(*word);
      }
      out.push_back(model->ClassScore(words, class_index));
    }
    return out;
  };
}

SequenceSample MakeSyntheticSample(const std::vector<std::string>& tokens,
                                   const SyntheticTokenModel& model) {
  SequenceSample sample;
  sample.tokens.assign(tokens.begin(), tokens.end());
  sample.masking.baseline_token = model.config().mask_token;
  return sample;
}

}  // namespace ordshap
