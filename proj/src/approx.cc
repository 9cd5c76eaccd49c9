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

#include "ordshap/approx.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ordshap/compensated_sum.h"
#include "ordshap/exact.h"
#include "ordshap/sampler.h"

namespace ordshap {
namespace {

double Binomial(int n, int k) {
  k = std::min(k, n - k);
  double out = 1.0;
  for (int j = 1; j <= k; ++j) out = out * (n - k + j) / j;
  return out;
}

std::string ColumnList(const std::vector<int>& columns) {
  std::string out;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (k > 0) out += ", ";
    out += std::to_string(columns[k]);
  }
  return out;
}

}  // namespace

void SamplingConfig::Validate() const {
  if (K < 1 || L < 1) {
    throw std::invalid_argument("sampling needs K >= 1 and L >= 1");
  }
}

void LeastSquaresConfig::Validate(int n) const {
  if (n < 2) throw std::invalid_argument("least squares needs n >= 2");
  if (K < n) {
    throw std::invalid_argument("least squares needs K >= n (K = " +
                                std::to_string(K) + ", n = " +
                                std::to_string(n) + ")");
  }
  if (L < 1 || static_cast<long long>(K) * L < n) {
    throw std::invalid_argument("least squares needs L >= 1 and K*L >= n");
  }
  if (eliminated_feature < 1 || eliminated_feature > n) {
    throw std::invalid_argument("eliminated feature must lie in 1..n");
  }
  if (!(ridge >= 0.0)) throw std::invalid_argument("ridge must be >= 0");
}

void WeightedLinearSystem::Validate() const {
  if (weights.size() != design.rows() || targets.size() != design.rows()) {
    throw std::invalid_argument("design, weights and targets disagree in rows");
  }
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    if (!std::isfinite(weights[k]) || weights[k] < 0.0) {
      throw std::invalid_argument("weights must be finite and non-negative");
    }
  }
}

double MuWeight(int n, int s) {
  if (s < 1 || s > n - 1) {
    throw std::invalid_argument(
        "mu(s) is defined for 1 <= s <= n-1 (empty and full coalitions carry "
        "infinite weight); got s = " +
        std::to_string(s) + ", n = " + std::to_string(n));
  }
  return (n - 1) / (Binomial(n, s) * s * (n - s));
}

Eigen::VectorXd SolveWeighted(const WeightedLinearSystem& system,
                              double ridge) {
  system.Validate();
  const Eigen::VectorXd root = system.weights.cwiseSqrt();
  const Eigen::MatrixXd a = root.asDiagonal() * system.design;
  const Eigen::VectorXd b = root.cwiseProduct(system.targets);
  if (ridge > 0.0) {
    Eigen::MatrixXd normal = a.transpose() * a;
    normal.diagonal().array() += ridge;
    return normal.ldlt().solve(a.transpose() * b);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < a.cols()) {
    std::vector<int> deficient;
    for (Eigen::Index k = qr.rank(); k < a.cols(); ++k) {
      deficient.push_back(qr.colsPermutation().indices()[k]);
    }
    std::sort(deficient.begin(), deficient.end());
    throw RankDeficiencyError(
        "weighted design has rank " + std::to_string(qr.rank()) + " < " +
            std::to_string(a.cols()) + "; dependent columns: " +
            ColumnList(deficient),
        deficient);
  }
  return qr.solve(b);
}

AttributionResult SamplingEstimate(const OrderedGame& game,
                                   const SamplingConfig& config) {
  return SamplingEstimate(game, config,
                          PositionGrouping::Identity(game.num_players()));
}

AttributionResult SamplingEstimate(const OrderedGame& game,
                                   const SamplingConfig& config,
                                   const PositionGrouping& grouping) {
  config.Validate();
  const int n = game.num_players();
  if (grouping.num_positions() != n) {
    throw std::invalid_argument("grouping does not cover the game's players");
  }
  const int columns = grouping.num_columns();
  std::vector<CompensatedSum> sums(static_cast<std::size_t>(n) * columns);
  std::vector<std::int64_t> hits(sums.size(), 0);
  const SeededSampler root(config.seed);
  std::int64_t queries_issued = 0;

  for (int i = 1; i <= n; ++i) {
    SeededSampler sampler = root.Derive(static_cast<std::uint64_t>(i));
    for (int l = 0; l < config.L; ++l) {
      const Permutation outer = sampler.SamplePermutation(n);
      std::vector<GameQuery> queries;
      queries.reserve(2 * static_cast<std::size_t>(config.K));
      for (int k = 0; k < config.K; ++k) {
        const Permutation inner = sampler.SamplePermutation(n);
        const Subset without = PredecessorSet(inner, i);
        queries.push_back({without.With(i), outer});
        queries.push_back({without, outer});
      }
      const std::vector<double> values = game.EvaluateMany(queries);
      queries_issued += static_cast<std::int64_t>(queries.size());
      const std::size_t cell =
          static_cast<std::size_t>(i - 1) * columns +
          (grouping.ColumnOf(outer.PositionOf(i)) - 1);
      for (int k = 0; k < config.K; ++k) {
        sums[cell].Add(values[2 * k] - values[2 * k + 1]);
      }
      hits[cell] += config.K;
    }
  }

  OrdShapMatrix gamma(n, grouping);
  const auto& sizes = grouping.column_sizes();
  for (int i = 1; i <= n; ++i) {
    for (int c = 1; c <= columns; ++c) {
      const std::size_t cell = static_cast<std::size_t>(i - 1) * columns + (c - 1);
      if (hits[cell] == 0) continue;
      gamma.set(i, c,
                sizes[c - 1] * sums[cell].value() /
                    static_cast<double>(hits[cell]));
    }
  }
  AttributionMeta meta;
  meta.estimator = "sampling";
  meta.game = game.Descriptor();
  meta.K = config.K;
  meta.L = config.L;
  meta.seed = config.seed;
  meta.baseline = game.Evaluate(Subset(n), Permutation::Identity(n));
  meta.evaluations = queries_issued + 1;
  return ResultFromMatrix(std::move(gamma), std::move(meta));
}

LeastSquaresDraw DrawLeastSquaresSamples(int n,
                                         const LeastSquaresConfig& config) {
  config.Validate(n);
  SeededSampler sampler(config.seed);
  std::vector<Permutation> drawn;
  drawn.reserve(static_cast<std::size_t>(config.K) * config.L);
  for (int r = 0; r < config.K * config.L; ++r) {
    drawn.push_back(sampler.SamplePermutation(n));
  }
  LeastSquaresDraw draw;
  for (int k = 0; k < config.K; ++k) {
    draw.subsets.push_back(SampleProperSubset(sampler, n));
  }
  draw.orders.resize(config.K);
  for (int k = 0; k < config.K; ++k) {
    for (int l = 0; l < config.L; ++l) {
      draw.orders[k].push_back(drawn[static_cast<std::size_t>(l) * config.K + k]);
    }
  }
  draw.grand_orders.assign(drawn.begin(), drawn.begin() + config.L);
  return draw;
}

LeastSquaresDraw ExhaustiveLeastSquaresSamples(int n) {
  if (n < 2 || n > kMaxOrderedPlayers) {
    throw SizeGuardError("exhaustive least squares needs 2 <= n <= " +
                         std::to_string(kMaxOrderedPlayers));
  }
  std::vector<Permutation> all;
  std::vector<int> line(n);
  std::iota(line.begin(), line.end(), 1);
  do {
    all.emplace_back(line);
  } while (std::next_permutation(line.begin(), line.end()));
  LeastSquaresDraw draw;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    draw.subsets.push_back(Subset::FromMask(n, mask));
    draw.orders.push_back(all);
  }
  draw.grand_orders = all;
  return draw;
}

LeastSquaresEvaluations EvaluateDraw(const OrderedGame& game,
                                     const LeastSquaresDraw& draw) {
  const int n = game.num_players();
  std::vector<GameQuery> queries;
  queries.push_back({Subset(n), Permutation::Identity(n)});
  for (const Permutation& order : draw.grand_orders) {
    queries.push_back({Subset::Full(n), order});
  }
  for (std::size_t k = 0; k < draw.subsets.size(); ++k) {
    for (const Permutation& order : draw.orders[k]) {
      queries.push_back({draw.subsets[k], order});
    }
  }
  const std::vector<double> values = game.EvaluateMany(queries);

  LeastSquaresEvaluations out;
  out.queries = static_cast<std::int64_t>(queries.size());
  out.baseline = values[0];
  std::size_t next = 1;
  CompensatedSum grand;
  for (std::size_t l = 0; l < draw.grand_orders.size(); ++l) {
    grand.Add(values[next++]);
  }
  out.grand_mean = grand.value() / static_cast<double>(draw.grand_orders.size());
  out.coalition_values.resize(draw.subsets.size());
  for (std::size_t k = 0; k < draw.subsets.size(); ++k) {
    for (std::size_t l = 0; l < draw.orders[k].size(); ++l) {
      out.coalition_values[k].push_back(values[next++]);
    }
  }
  return out;
}

WeightedLinearSystem BuildAlphaSystem(const LeastSquaresDraw& draw,
                                      const LeastSquaresEvaluations& values) {
  const int rows = static_cast<int>(draw.subsets.size());
  if (rows == 0) throw std::invalid_argument("empty least-squares draw");
  const int n = draw.subsets.front().universe();
  WeightedLinearSystem system;
  system.design = Eigen::MatrixXd::Zero(rows, n);
  system.weights.resize(rows);
  system.targets.resize(rows);
  for (int k = 0; k < rows; ++k) {
    const Subset& s = draw.subsets[k];
    for (int j = 1; j <= n; ++j) {
      if (s.Contains(j)) system.design(k, j - 1) = 1.0;
    }
    system.weights[k] = MuWeight(n, s.size());
    CompensatedSum mean;
    for (double v : values.coalition_values[k]) mean.Add(v);
    system.targets[k] =
        mean.value() / static_cast<double>(values.coalition_values[k].size()) -
        values.baseline;
  }
  return system;
}

WeightedLinearSystem EliminateFeature(const WeightedLinearSystem& alpha_system,
                                      int eliminated_feature, double total) {
  const Eigen::Index n = alpha_system.design.cols();
  const Eigen::Index e = eliminated_feature - 1;
  if (e < 0 || e >= n) {
    throw std::invalid_argument("eliminated feature outside the system");
  }
  WeightedLinearSystem reduced;
  reduced.weights = alpha_system.weights;
  reduced.design.resize(alpha_system.design.rows(), n - 1);
  const Eigen::VectorXd eliminated = alpha_system.design.col(e);
  Eigen::Index out = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == e) continue;
    reduced.design.col(out++) = alpha_system.design.col(j) - eliminated;
  }
  reduced.targets = alpha_system.targets - total * eliminated;
  return reduced;
}

WeightedLinearSystem BuildBetaSystem(const LeastSquaresDraw& draw,
                                     const LeastSquaresEvaluations& values,
                                     const std::vector<double>& alpha,
                                     const PositionGrouping& grouping) {
  const int n = static_cast<int>(alpha.size());
  if (grouping.num_positions() != n) {
    throw std::invalid_argument("grouping does not cover the game's players");
  }
  std::size_t rows = 0;
  for (const auto& orders : draw.orders) rows += orders.size();
  const double mean_label = grouping.MeanLabel();
  WeightedLinearSystem system;
  system.design = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), n);
  system.weights.resize(static_cast<Eigen::Index>(rows));
  system.targets.resize(static_cast<Eigen::Index>(rows));
  Eigen::Index r = 0;
  for (std::size_t k = 0; k < draw.subsets.size(); ++k) {
    const Subset& s = draw.subsets[k];
    const std::vector<int> members = s.Members();
    double explained = 0.0;
    for (int j : members) explained += alpha[j - 1];
    const double weight = MuWeight(n, s.size());
    for (std::size_t l = 0; l < draw.orders[k].size(); ++l, ++r) {
      const Permutation& order = draw.orders[k][l];
      for (int j : members) {
        system.design(r, j - 1) =
            grouping.LabelOf(order.PositionOf(j)) - mean_label;
      }
      system.weights[r] = weight;
      system.targets[r] =
          values.coalition_values[k][l] - values.baseline - explained;
    }
  }
  return system;
}

AttributionResult LeastSquaresEstimate(const OrderedGame& game,
                                       const LeastSquaresConfig& config) {
  return LeastSquaresEstimate(game, config,
                              PositionGrouping::Identity(game.num_players()));
}

AttributionResult LeastSquaresEstimate(const OrderedGame& game,
                                       const LeastSquaresConfig& config,
                                       const PositionGrouping& grouping) {
  const LeastSquaresDraw draw =
      DrawLeastSquaresSamples(game.num_players(), config);
  return LeastSquaresFromDraw(game, draw, config, grouping);
}

AttributionResult LeastSquaresFromDraw(const OrderedGame& game,
                                       const LeastSquaresDraw& draw,
                                       const LeastSquaresConfig& config,
                                       const PositionGrouping& grouping) {
  const int n = game.num_players();
  if (n < 2) throw std::invalid_argument("least squares needs n >= 2");
  if (config.eliminated_feature < 1 || config.eliminated_feature > n) {
    throw std::invalid_argument("eliminated feature must lie in 1..n");
  }
  const LeastSquaresEvaluations values = EvaluateDraw(game, draw);
  const double total = values.grand_mean - values.baseline;

  const WeightedLinearSystem alpha_system = BuildAlphaSystem(draw, values);
  const Eigen::VectorXd reduced = SolveWeighted(
      EliminateFeature(alpha_system, config.eliminated_feature, total),
      config.ridge);
  std::vector<double> alpha(n);
  double assigned = 0.0;
  for (int j = 1, out = 0; j <= n; ++j) {
    if (j == config.eliminated_feature) continue;
    alpha[j - 1] = reduced[out++];
    assigned += alpha[j - 1];
  }
  alpha[config.eliminated_feature - 1] = total - assigned;

  const Eigen::VectorXd beta = SolveWeighted(
      BuildBetaSystem(draw, values, alpha, grouping), config.ridge);

  AttributionResult result;
  result.vi = alpha;
  result.pi.assign(beta.data(), beta.data() + beta.size());
  result.meta.estimator = "least-squares";
  result.meta.game = game.Descriptor();
  result.meta.K = static_cast<int>(draw.subsets.size());
  result.meta.L = draw.orders.empty() ? 0 : static_cast<int>(draw.orders[0].size());
  result.meta.seed = config.seed;
  result.meta.baseline = values.baseline;
  result.meta.evaluations = values.queries;
  return result;
}

}  // namespace ordshap
