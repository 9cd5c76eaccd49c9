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


// Faithfulness metrics for positional attributions: PI permutation curves,
// inclusion/exclusion AUC with a permutation step, and insertion/deletion
// AUC.

#ifndef ORDSHAP_METRICS_H_
#define ORDSHAP_METRICS_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "ordshap/gateway.h"
#include "ordshap/sequence.h"

namespace ordshap {

struct EvalCurve {
  std::vector<double> fractions;
  std::vector<double> scores;
  double auc = 0.0;

  // Throws std::invalid_argument on mismatched lengths or a grid that is not
  // strictly increasing inside [0, 1].
  static EvalCurve FromPoints(std::vector<double> fractions,
                              std::vector<double> scores);

  nlohmann::json ToJson() const;
  static EvalCurve FromJson(const nlohmann::json& j);
  // "fraction,score" header plus one row per point.
  std::string ToCsv() const;
};

double TrapezoidAuc(const std::vector<double>& x, const std::vector<double>& y);

// Pointwise mean of curves sharing one grid.
EvalCurve MeanCurve(const std::vector<EvalCurve>& curves);

struct MetricConfig {
  std::vector<double> k_grid = DefaultGrid();
  int permutations_per_k = 10;
  std::uint64_t seed = 0;
  // When false, masked samples are scored in their original order.
  bool permutation_step = true;

  static std::vector<double> DefaultGrid();
  void Validate() const;
  nlohmann::json ToJson() const;
};

enum class MaskMode { kInclusion, kExclusion };
enum class CurveMode { kInsertion, kDeletion };

// Per-class model scores through a gateway.
class ClassScorer {
 public:
  ClassScorer(std::shared_ptr<ModelGateway> gateway, int num_classes);

  // scores[s][c] for every sequence s and class c.
  std::vector<std::vector<double>> Scores(
      const std::vector<TokenSequence>& sequences) const;
  // Argmax class for each sequence, ties to the lower index.
  std::vector<int> Predict(const std::vector<TokenSequence>& sequences) const;

  int num_classes() const { return num_classes_; }

 private:
  std::shared_ptr<ModelGateway> gateway_;
  int num_classes_;
};

// Number of features selected at fraction k of n.
int SelectionCount(int n, double fraction);

// Feature indices sorted by attribution, largest first; ties by index.
std::vector<int> RankBySignedValue(const std::vector<double>& attributions);

// New order for the PI curve: of the `count` features with largest
// |attribution|, negatives move to the front and positives to the back, each
// block ascending by attribution. Everything else keeps its relative order
// in between. Entry p is the original index placed at position p.
std::vector<int> PiReorder(const std::vector<double>& attributions, int count);

// Positions kept unmasked when the top `count` features are selected.
std::vector<bool> KeptPositions(const std::vector<double>& attributions,
                                int count, MaskMode mode);

// Replaces positions not kept with the sample's first reference sequence.
TokenSequence MaskSequence(const SequenceSample& sample,
                           const std::vector<bool>& kept);

// Throws std::invalid_argument on size mismatches; model failures propagate.
EvalCurve PiPermutationCurve(const ClassScorer& scorer,
                             const SequenceSample& sample,
                             const std::vector<double>& attributions,
                             const MetricConfig& cfg);

EvalCurve InclusionExclusionCurve(
    const ClassScorer& scorer, const std::vector<SequenceSample>& samples,
    const std::vector<std::vector<double>>& attributions, MaskMode mode,
    const MetricConfig& cfg);

EvalCurve InsertionDeletionCurve(
    const ClassScorer& scorer, const std::vector<SequenceSample>& samples,
    const std::vector<std::vector<double>>& attributions, CurveMode mode,
    const MetricConfig& cfg);

// U(0, 1) attributions, the random baseline.
std::vector<double> RandomAttributions(int n, std::uint64_t seed);

}  // namespace ordshap

#endif  // ORDSHAP_METRICS_H_
