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

#include "ordshap/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ordshap/sampler.h"

namespace ordshap {
namespace {

enum class Scoring { kAgreement, kProbability };

void CheckAttributions(const std::vector<SequenceSample>& samples,
                       const std::vector<std::vector<double>>& attributions) {
  if (samples.size() != attributions.size()) {
    throw std::invalid_argument("need one attribution vector per sample");
  }
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (static_cast<int>(attributions[s].size()) != samples[s].size()) {
      throw std::invalid_argument("attribution length differs from sample " +
                                  std::to_string(s));
    }
  }
}

int Argmax(const std::vector<double>& scores) {
  return static_cast<int>(std::max_element(scores.begin(), scores.end()) -
                          scores.begin());
}

// Shared driver for inclusion/exclusion and insertion/deletion.
EvalCurve MaskedCurve(const ClassScorer& scorer,
                      const std::vector<SequenceSample>& samples,
                      const std::vector<std::vector<double>>& attributions,
                      MaskMode mode, Scoring scoring,
                      const MetricConfig& cfg) {
  cfg.Validate();
  CheckAttributions(samples, attributions);
  if (samples.empty()) throw std::invalid_argument("no samples to evaluate");

  std::vector<TokenSequence> originals;
  for (const SequenceSample& sample : samples) originals.push_back(sample.tokens);
  const std::vector<int> predicted = scorer.Predict(originals);

  const int trials = cfg.permutation_step ? cfg.permutations_per_k : 1;
  const SeededSampler root(cfg.seed);
  std::vector<TokenSequence> batch;
  std::vector<std::size_t> owner;
  for (std::size_t g = 0; g < cfg.k_grid.size(); ++g) {
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const int n = samples[s].size();
      const TokenSequence masked = MaskSequence(
          samples[s], KeptPositions(attributions[s],
                                    SelectionCount(n, cfg.k_grid[g]), mode));
      for (int t = 0; t < trials; ++t) {
        if (!cfg.permutation_step) {
          batch.push_back(masked);
        } else {
          SeededSampler sampler = root.Derive(s).Derive(g * trials + t);
          const Permutation perm = sampler.SamplePermutation(n);
          TokenSequence shuffled(n);
          for (int p = 1; p <= n; ++p) shuffled[p - 1] = masked[perm.At(p) - 1];
          batch.push_back(std::move(shuffled));
        }
        owner.push_back(s);
      }
    }
  }

  const std::vector<std::vector<double>> scores = scorer.Scores(batch);
  const std::size_t per_k = samples.size() * trials;
  std::vector<double> curve(cfg.k_grid.size(), 0.0);
  for (std::size_t g = 0; g < cfg.k_grid.size(); ++g) {
    double total = 0.0;
    for (std::size_t j = g * per_k; j < (g + 1) * per_k; ++j) {
      const int target = predicted[owner[j]];
      total += scoring == Scoring::kAgreement
                   ? (Argmax(scores[j]) == target ? 1.0 : 0.0)
                   : scores[j][target];
    }
    curve[g] = total / static_cast<double>(per_k);
  }
  return EvalCurve::FromPoints(cfg.k_grid, std::move(curve));
}

}  // namespace

double TrapezoidAuc(const std::vector<double>& x,
                    const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("curve coordinates differ in length");
  }
  double area = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    area += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  }
  return area;
}

EvalCurve EvalCurve::FromPoints(std::vector<double> fractions,
                                std::vector<double> scores) {
  if (fractions.size() != scores.size() || fractions.empty()) {
    throw std::invalid_argument("curve needs matching, non-empty points");
  }
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (fractions[i] < 0.0 || fractions[i] > 1.0 ||
        (i > 0 && fractions[i] <= fractions[i - 1])) {
      throw std::invalid_argument(
          "fractions must be strictly increasing in [0, 1]");
    }
  }
  EvalCurve curve;
  curve.fractions = std::move(fractions);
  curve.scores = std::move(scores);
  curve.auc = TrapezoidAuc(curve.fractions, curve.scores);
  return curve;
}

nlohmann::json EvalCurve::ToJson() const {
  return {{"fractions", fractions}, {"scores", scores}, {"auc", auc}};
}

EvalCurve EvalCurve::FromJson(const nlohmann::json& j) {
  return FromPoints(j.at("fractions").get<std::vector<double>>(),
                    j.at("scores").get<std::vector<double>>());
}

std::string EvalCurve::ToCsv() const {
  std::ostringstream out;
  out.precision(17);
  out << "fraction,score\n";
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    out << fractions[i] << ',' << scores[i] << '\n';
  }
  return out.str();
}

EvalCurve MeanCurve(const std::vector<EvalCurve>& curves) {
  if (curves.empty()) throw std::invalid_argument("no curves to average");
  std::vector<double> mean(curves.front().scores.size(), 0.0);
  for (const EvalCurve& curve : curves) {
    if (curve.fractions != curves.front().fractions) {
      throw std::invalid_argument("curves use different grids");
    }
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += curve.scores[i];
  }
  for (double& v : mean) v /= static_cast<double>(curves.size());
  return EvalCurve::FromPoints(curves.front().fractions, std::move(mean));
}

std::vector<double> MetricConfig::DefaultGrid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

void MetricConfig::Validate() const {
  if (permutations_per_k < 1) {
    throw std::invalid_argument("permutations_per_k must be >= 1");
  }
  EvalCurve::FromPoints(k_grid, std::vector<double>(k_grid.size(), 0.0));
}

nlohmann::json MetricConfig::ToJson() const {
  return {{"k_grid", k_grid},
          {"permutations_per_k", permutations_per_k},
          {"seed", seed},
          {"permutation_step", permutation_step}};
}

ClassScorer::ClassScorer(std::shared_ptr<ModelGateway> gateway,
                         int num_classes)
    : gateway_(std::move(gateway)), num_classes_(num_classes) {
  if (!gateway_) throw std::invalid_argument("scorer needs a gateway");
  if (num_classes_ < 1) throw std::invalid_argument("num_classes must be >= 1");
}

std::vector<std::vector<double>> ClassScorer::Scores(
    const std::vector<TokenSequence>& sequences) const {
  std::vector<std::vector<double>> out(sequences.size(),
                                       std::vector<double>(num_classes_));
  for (int c = 0; c < num_classes_; ++c) {
    const std::vector<double> values = gateway_->Evaluate(sequences, c);
    for (std::size_t s = 0; s < sequences.size(); ++s) out[s][c] = values[s];
  }
  return out;
}

std::vector<int> ClassScorer::Predict(
    const std::vector<TokenSequence>& sequences) const {
  std::vector<int> out;
  for (const std::vector<double>& row : Scores(sequences)) {
    out.push_back(Argmax(row));
  }
  return out;
}

int SelectionCount(int n, double fraction) {
  return std::clamp(static_cast<int>(std::lround(fraction * n)), 0, n);
}

std::vector<int> RankBySignedValue(const std::vector<double>& attributions) {
  std::vector<int> order(attributions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return attributions[a] > attributions[b];
  });
  return order;
}

std::vector<int> PiReorder(const std::vector<double>& attributions,
                           int count) {
  const int n = static_cast<int>(attributions.size());
  std::vector<int> by_magnitude(n);
  std::iota(by_magnitude.begin(), by_magnitude.end(), 0);
  std::stable_sort(by_magnitude.begin(), by_magnitude.end(), [&](int a, int b) {
    return std::abs(attributions[a]) > std::abs(attributions[b]);
  });
  std::vector<bool> moved(n, false);
  std::vector<int> front, back;
  for (int r = 0; r < std::clamp(count, 0, n); ++r) {
    const int i = by_magnitude[r];
    if (attributions[i] < 0.0) {
      front.push_back(i);
      moved[i] = true;
    } else if (attributions[i] > 0.0) {
      back.push_back(i);
      moved[i] = true;
    }
  }
  auto ascending = [&](int a, int b) {
    return attributions[a] < attributions[b] ||
           (attributions[a] == attributions[b] && a < b);
  };
  std::sort(front.begin(), front.end(), ascending);
  std::sort(back.begin(), back.end(), ascending);
  std::vector<int> order = front;
  for (int i = 0; i < n; ++i) {
    if (!moved[i]) order.push_back(i);
  }
  order.insert(order.end(), back.begin(), back.end());
  return order;
}

std::vector<bool> KeptPositions(const std::vector<double>& attributions,
                                int count, MaskMode mode) {
  const std::vector<int> ranked = RankBySignedValue(attributions);
  std::vector<bool> selected(attributions.size(), false);
  for (int r = 0; r < std::clamp<int>(count, 0, ranked.size()); ++r) {
    selected[ranked[r]] = true;
  }
  if (mode == MaskMode::kExclusion) selected.flip();
  return selected;
}

TokenSequence MaskSequence(const SequenceSample& sample,
                           const std::vector<bool>& kept) {
  if (static_cast<int>(kept.size()) != sample.size()) {
    throw std::invalid_argument("mask length differs from the sample");
  }
  const TokenSequence reference = sample.ReferenceSequences().front();
  TokenSequence out = sample.tokens;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!kept[i]) out[i] = reference[i];
  }
  return out;
}

EvalCurve PiPermutationCurve(const ClassScorer& scorer,
                             const SequenceSample& sample,
                             const std::vector<double>& attributions,
                             const MetricConfig& cfg) {
  cfg.Validate();
  const int n = sample.size();
  if (static_cast<int>(attributions.size()) != n) {
    throw std::invalid_argument("attribution length differs from the sample");
  }
  std::vector<TokenSequence> batch{sample.tokens};
  for (double k : cfg.k_grid) {
    const std::vector<int> order = PiReorder(attributions, SelectionCount(n, k));
    TokenSequence moved(n);
    for (int p = 0; p < n; ++p) moved[p] = sample.tokens[order[p]];
    batch.push_back(std::move(moved));
  }
  const std::vector<std::vector<double>> scores = scorer.Scores(batch);
  const int target = Argmax(scores.front());
  std::vector<double> curve;
  for (std::size_t g = 0; g < cfg.k_grid.size(); ++g) {
    curve.push_back(scores[g + 1][target]);
  }
  return EvalCurve::FromPoints(cfg.k_grid, std::move(curve));
}

EvalCurve InclusionExclusionCurve(
    const ClassScorer& scorer, const std::vector<SequenceSample>& samples,
    const std::vector<std::vector<double>>& attributions, MaskMode mode,
    const MetricConfig& cfg) {
  return MaskedCurve(scorer, samples, attributions, mode, Scoring::kAgreement,
                     cfg);
}

EvalCurve InsertionDeletionCurve(
    const ClassScorer& scorer, const std::vector<SequenceSample>& samples,
    const std::vector<std::vector<double>>& attributions, CurveMode mode,
    const MetricConfig& cfg) {
  return MaskedCurve(
      scorer, samples, attributions,
      mode == CurveMode::kInsertion ? MaskMode::kInclusion
                                    : MaskMode::kExclusion,
      Scoring::kProbability, cfg);
}

std::vector<double> RandomAttributions(int n, std::uint64_t seed) {
  SeededSampler sampler(seed);
  std::vector<double> out(n);
  for (double& v : out) v = sampler.UniformReal();
  return out;
}

}  // namespace ordshap
