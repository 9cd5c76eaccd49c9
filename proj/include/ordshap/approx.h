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

// Fixed-budget estimators for games too large to enumerate:
//
//  * SamplingEstimate fills the gamma matrix by permutation sampling. Each
//    cell is the mean marginal contribution over the outer orders that put
//    the feature at that position, so cells converge to the exact matrix.
//  * LeastSquaresEstimate solves the constrained weighted regression for
//    value importance (alpha) and then, holding alpha fixed, the positional
//    slopes (beta). No gamma matrix is produced.

#ifndef ORDSHAP_APPROX_H_
#define ORDSHAP_APPROX_H_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ordshap/attribution.h"
#include "ordshap/game.h"
#include "ordshap/permutation.h"

namespace ordshap {

struct SamplingConfig {
  int K = 64;  // inner (coalition) orders per outer order
  int L = 64;  // outer orders per feature
  std::uint64_t seed = 0;

  // Throws std::invalid_argument unless K, L >= 1.
  void Validate() const;
};

struct LeastSquaresConfig {
  int K = 256;  // sampled coalitions
  int L = 8;    // orders per coalition
  std::uint64_t seed = 0;
  int eliminated_feature = 1;  // alpha recovered from the constraint
  double ridge = 0.0;          // opt-in diagonal regularizer

  // Throws std::invalid_argument for n < 2, K < n, K*L < n, a bad
  // eliminated feature or a negative ridge.
  void Validate(int n) const;
};

struct WeightedLinearSystem {
  Eigen::MatrixXd design;   // m x p
  Eigen::VectorXd weights;  // m, non-negative
  Eigen::VectorXd targets;  // m

  // Throws std::invalid_argument on mismatched shapes or bad weights.
  void Validate() const;
};

class RankDeficiencyError : public std::runtime_error {
 public:
  RankDeficiencyError(const std::string& message,
                      std::vector<int> deficient_columns)
      : std::runtime_error(message),
        deficient_columns_(std::move(deficient_columns)) {}

  // 0-based columns left out of the numerically independent set.
  const std::vector<int>& deficient_columns() const {
    return deficient_columns_;
  }

 private:
  std::vector<int> deficient_columns_;
};

// mu(s) = (n-1) / (C(n,s) s (n-s)). Throws std::invalid_argument unless
// 1 <= s <= n-1.
double MuWeight(int n, int s);

// argmin_x sum_k w_k (design_k . x - target_k)^2. Throws RankDeficiencyError
// when the weighted design is rank deficient and ridge == 0.
Eigen::VectorXd SolveWeighted(const WeightedLinearSystem& system,
                              double ridge = 0.0);

AttributionResult SamplingEstimate(const OrderedGame& game,
                                   const SamplingConfig& config);
AttributionResult SamplingEstimate(const OrderedGame& game,
                                   const SamplingConfig& config,
                                   const PositionGrouping& grouping);

// The coalitions and orders the least-squares estimator evaluates.
// orders[k][l] pairs with subsets[k]; grand_orders feed the grand-coalition
// mean used by the efficiency constraint.
struct LeastSquaresDraw {
  std::vector<Subset> subsets;
  std::vector<std::vector<Permutation>> orders;
  std::vector<Permutation> grand_orders;
};

// K*L uniform orders and K uniform proper coalitions. orders[k][l] is the
// (l*K + k)-th drawn order; the grand-coalition orders are the first L.
LeastSquaresDraw DrawLeastSquaresSamples(int n,
                                         const LeastSquaresConfig& config);
// Every proper coalition paired with every order of S_N, and every order for
// the grand coalition. Guard: n <= 6.
LeastSquaresDraw ExhaustiveLeastSquaresSamples(int n);

// omega values for a draw, relative to the baseline omega(empty, identity).
struct LeastSquaresEvaluations {
  double baseline = 0.0;
  std::vector<std::vector<double>> coalition_values;  // [k][l], raw omega
  double grand_mean = 0.0;
  std::int64_t queries = 0;
};

LeastSquaresEvaluations EvaluateDraw(const OrderedGame& game,
                                     const LeastSquaresDraw& draw);

// Unconstrained alpha system: indicator design, mu weights, targets
// mean_l omega(S_k, sigma) - baseline.
WeightedLinearSystem BuildAlphaSystem(const LeastSquaresDraw& draw,
                                      const LeastSquaresEvaluations& values);

// Substitutes alpha_e = total - sum_{j != e} alpha_j. The returned system
// has one column per remaining feature in increasing order.
WeightedLinearSystem EliminateFeature(const WeightedLinearSystem& alpha_system,
                                      int eliminated_feature, double total);

// One row per (k, l): design 1[j in S_k] * (label(sigma^{-1}(j)) - mean
// label), targets omega(S_k, sigma) - baseline - sum_{j in S_k} alpha_j.
WeightedLinearSystem BuildBetaSystem(const LeastSquaresDraw& draw,
                                     const LeastSquaresEvaluations& values,
                                     const std::vector<double>& alpha,
                                     const PositionGrouping& grouping);

AttributionResult LeastSquaresEstimate(const OrderedGame& game,
                                       const LeastSquaresConfig& config);
AttributionResult LeastSquaresEstimate(const OrderedGame& game,
                                       const LeastSquaresConfig& config,
                                       const PositionGrouping& grouping);
AttributionResult LeastSquaresFromDraw(const OrderedGame& game,
                                       const LeastSquaresDraw& draw,
                                       const LeastSquaresConfig& config,
                                       const PositionGrouping& grouping);

}  // namespace ordshap

#endif  // ORDSHAP_APPROX_H_
