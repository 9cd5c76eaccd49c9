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

#ifndef ORDSHAP_SEQUENCE_H_
#define ORDSHAP_SEQUENCE_H_

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ordshap/attribution.h"
#include "ordshap/permutation.h"

namespace ordshap {

// A feature value: a string token or an embedding-level numeric vector.
using Token = std::variant<std::string, std::vector<double>>;
using TokenSequence = std::vector<Token>;

inline constexpr char kDefaultMaskToken[] = "[MASK]";

nlohmann::json TokenToJson(const Token& token);
// Throws std::invalid_argument unless `j` is a string or an array of numbers.
Token TokenFromJson(const nlohmann::json& j);
nlohmann::json SequenceToJson(const TokenSequence& sequence);
// Exact, order-preserving serialization used as the cache key.
std::string CanonicalKey(const TokenSequence& sequence);

// How features outside the coalition are filled in.
struct MaskingPolicy {
  enum class Mode { kSingleBaseline, kReferenceSet };

  Mode mode = Mode::kSingleBaseline;
  Token baseline_token = std::string(kDefaultMaskToken);
  // kReferenceSet: omega is the mean over these, each of length n.
  std::vector<TokenSequence> references;
};

struct SequenceSample {
  TokenSequence tokens;
  // g: position -> group label, non-decreasing, one entry per token.
  std::optional<std::vector<int>> groups;
  MaskingPolicy masking;

  int size() const { return static_cast<int>(tokens.size()); }

  // Throws std::invalid_argument when the sample is empty, the group map is
  // not total or not monotone, or a reference has the wrong length.
  void Validate() const;

  // The reference sequences x' the policy averages over (one for
  // kSingleBaseline: the baseline token repeated n times).
  std::vector<TokenSequence> ReferenceSequences() const;

  // {"tokens": [...], "groups": [...]?, "baseline": ..., "references": ...?}
  static SequenceSample FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

// Position sigma^{-1}(i) holds x_i for i in S and reference_i otherwise, so
// reference values travel with their feature's position.
// Throws std::invalid_argument on length mismatches.
TokenSequence Materialize(const TokenSequence& tokens, const Subset& coalition,
                          const Permutation& order,
                          const TokenSequence& reference);

// Position index set G and the lookup g; the identity when the sample has
// no groups.
PositionGrouping GroupedPositions(const SequenceSample& sample);

}  // namespace ordshap

#endif  // ORDSHAP_SEQUENCE_H_
