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

#include "ordshap/sequence.h"

#include <stdexcept>

namespace ordshap {

nlohmann::json TokenToJson(const Token& token) {
  if (const auto* s = std::get_if<std::string>(&token)) return *s;
  return std::get<std::vector<double>>(token);
}

Token TokenFromJson(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::vector<double> values;
    for (const auto& v : j) {
      if (!v.is_number()) {
        throw std::invalid_argument("embedding tokens must hold numbers");
      }
      values.push_back(v.get<double>());
    }
    return values;
  }
  throw std::invalid_argument("token must be a string or a numeric array");
}

nlohmann::json SequenceToJson(const TokenSequence& sequence) {
  nlohmann::json out = nlohmann::json::array();
  for (const Token& t : sequence) out.push_back(TokenToJson(t));
  return out;
}

std::string CanonicalKey(const TokenSequence& sequence) {
  return SequenceToJson(sequence).dump();
}

void SequenceSample::Validate() const {
  const int n = size();
  if (n < 1) throw std::invalid_argument("sample has no tokens");
  if (groups) {
    if (static_cast<int>(groups->size()) != n) {
      throw std::invalid_argument("group map covers " +
                                  std::to_string(groups->size()) +
                                  " positions, sample has " +
                                  std::to_string(n));
    }
    PositionGrouping check(*groups);  // monotone, positive
  }
  if (masking.mode == MaskingPolicy::Mode::kReferenceSet) {
    if (masking.references.empty()) {
      throw std::invalid_argument("reference_set masking needs references");
    }
    for (const TokenSequence& r : masking.references) {
      if (static_cast<int>(r.size()) != n) {
        throw std::invalid_argument("reference of length " +
                                    std::to_string(r.size()) +
                                    " for a sample of length " +
                                    std::to_string(n));
      }
    }
  }
}

std::vector<TokenSequence> SequenceSample::ReferenceSequences() const {
  if (masking.mode == MaskingPolicy::Mode::kReferenceSet) {
    return masking.references;
  }
  return {TokenSequence(tokens.size(), masking.baseline_token)};
}

SequenceSample SequenceSample::FromJson(const nlohmann::json& j) {
  SequenceSample sample;
  try {
    for (const auto& t : j.at("tokens")) {
      sample.tokens.push_back(TokenFromJson(t));
    }
    if (j.contains("groups") && !j["groups"].is_null()) {
      sample.groups = j["groups"].get<std::vector<int>>();
    }
    if (j.contains("baseline")) {
      sample.masking.baseline_token = TokenFromJson(j["baseline"]);
    }
    if (j.contains("references") && !j["references"].is_null()) {
      sample.masking.mode = MaskingPolicy::Mode::kReferenceSet;
      for (const auto& r : j["references"]) {
        TokenSequence reference;
        for (const auto& t : r) reference.push_back(TokenFromJson(t));
        sample.masking.references.push_back(std::move(reference));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad sample file: ") + e.what());
  }
  sample.Validate();
  return sample;
}

nlohmann::json SequenceSample::ToJson() const {
  nlohmann::json j;
  j["tokens"] = SequenceToJson(tokens);
  if (groups) j["groups"] = *groups;
  j["baseline"] = TokenToJson(masking.baseline_token);
  if (masking.mode == MaskingPolicy::Mode::kReferenceSet) {
    j["references"] = nlohmann::json::array();
    for (const TokenSequence& r : masking.references) {
      j["references"].push_back(SequenceToJson(r));
    }
  }
  return j;
}

TokenSequence Materialize(const TokenSequence& tokens, const Subset& coalition,
                          const Permutation& order,
                          const TokenSequence& reference) {
  const std::size_t n = tokens.size();
  if (reference.size() != n || static_cast<std::size_t>(order.size()) != n ||
      static_cast<std::size_t>(coalition.universe()) != n) {
    throw std::invalid_argument(
        "materialize: sample, reference, order and coalition must all have "
        "length " +
        std::to_string(n));
  }
  TokenSequence out(n);
  for (int i = 1; i <= static_cast<int>(n); ++i) {
    out[order.PositionOf(i) - 1] =
        coalition.Contains(i) ? tokens[i - 1] : reference[i - 1];
  }
  return out;
}

PositionGrouping GroupedPositions(const SequenceSample& sample) {
  if (!sample.groups) return PositionGrouping::Identity(sample.size());
  if (static_cast<int>(sample.groups->size()) != sample.size()) {
    throw std::invalid_argument("group map must cover every position");
  }
  return PositionGrouping(*sample.groups);
}

}  // namespace ordshap
