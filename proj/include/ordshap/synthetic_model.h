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

// Synthetic token-sequence model with separable value and position effects.
// Token t at position i contributes v(t, i) = a_t + b_t * (i - mean_i); the
// linear model sums the contributions and the sigmoid model squashes that
// sum. The mask token contributes nothing.

#ifndef ORDSHAP_SYNTHETIC_MODEL_H_
#define ORDSHAP_SYNTHETIC_MODEL_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ordshap/sampler.h"
#include "ordshap/sequence.h"
#include "ordshap/transport.h"

namespace ordshap {

enum class Link { kLinear, kSigmoid };

struct TokenValue {
  std::string token;
  double intercept = 0.0;  // a_t: value effect
  double slope = 0.0;      // b_t: change per position step
};

struct SyntheticModelConfig {
  std::vector<TokenValue> tokens;
  Link link = Link::kSigmoid;
  int sequence_length = 10;
  std::string mask_token = "[MASK]";
  std::uint64_t seed = 0;

  // Seven tokens A, B, C, D, Abar, Bbar, Cbar. A, B, Abar and Bbar carry a
  // positional slope; C, D and Cbar do not.
  static SyntheticModelConfig Default();

  nlohmann::json ToJson() const;
  // Throws std::invalid_argument on malformed input.
  static SyntheticModelConfig FromJson(const nlohmann::json& j);
};

class SyntheticTokenModel {
 public:
  // Throws std::invalid_argument on an empty alphabet, duplicate tokens, a
  // mask token that collides with the alphabet, or length < 1.
  explicit SyntheticTokenModel(SyntheticModelConfig config);

  const SyntheticModelConfig& config() const { return config_; }
  std::vector<std::string> Alphabet() const;
  int sequence_length() const { return config_.sequence_length; }
  bool IsPositional(const std::string& token) const;

  double Contribution(const std::string& token, int position) const;
  // Sum of contributions. Throws std::invalid_argument on a length mismatch
  // or a token outside the alphabet (the mask token is accepted).
  double LinearScore(std::span<const std::string> tokens) const;
  // f_linear or sigmoid(f_linear), depending on the link.
  double Output(std::span<const std::string> tokens) const;

  // Linear link: one class, the raw output. Sigmoid link: class 1 is the
  // output probability, class 0 its complement.
  int num_classes() const { return config_.link == Link::kLinear ? 1 : 2; }
  double ClassScore(std::span<const std::string> tokens,
                    int class_index) const;

  const TokenValue& ValueOf(const std::string& token) const;

 private:
  SyntheticModelConfig config_;
  double mean_position_;
};

double Sigmoid(double z);

// `count` sequences of i.i.d. tokens drawn uniformly from the alphabet.
std::vector<std::vector<std::string>> GenerateSyntheticDataset(
    SeededSampler& sampler, int count, const SyntheticTokenModel& model);

// Wraps the model for ModelGateway. Sequences must hold string tokens.
BatchModelFn AsBatchModel(std::shared_ptr<const SyntheticTokenModel> model);

// A single-baseline sample masked with the model's mask token.
SequenceSample MakeSyntheticSample(const std::vector<std::string>& tokens,
                                   const SyntheticTokenModel& model);

}  // namespace ordshap

#endif  // ORDSHAP_SYNTHETIC_MODEL_H_
