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

#include "ordshap/exact.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <string>

#include "ordshap/compensated_sum.h"

namespace ordshap {
namespace {

void CheckGuard(int n, int bound, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + ": n must be >= 1");
  if (n > bound) {
    throw SizeGuardError(std::string(what) + ": exact enumeration limited to n <= " +
                         std::to_string(bound) + ", got n = " +
                         std::to_string(n));
  }
}

double LogFactorial(int k) { return std::lgamma(k + 1.0); }

// (s-1)!(n-s)! / ((n-1)! n!) for |S| = s.
double OrdShapWeight(int n, int s) {
  return std::exp(LogFactorial(s - 1) + LogFactorial(n - s) -
                  LogFactorial(n - 1) - LogFactorial(n));
}

// s!(n-s-1)!/n! for |S| = s, i not in S.
double ShapleyWeight(int n, int s) {
  return std::exp(LogFactorial(s) + LogFactorial(n - s - 1) - LogFactorial(n));
}

std::vector<int> MaskMembers(int n, std::uint64_t mask) {
  std::vector<int> members;
  for (int k = 0; k < n; ++k) {
    if ((mask >> k) & 1u) members.push_back(k + 1);
  }
  return members;
}

std::uint64_t Bit(int player) { return std::uint64_t{1} << (player - 1); }

}  // namespace

std::vector<double> ShapleyExact(int n, const SetPayoff& payoff) {
  CheckGuard(n, kMaxSetPlayers, "shapley");
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> table(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    table[mask] = payoff(Subset::FromMask(n, mask));
  }
  std::vector<double> phi(n);
  for (int i = 1; i <= n; ++i) {
    CompensatedSum acc;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      if (mask & Bit(i)) continue;
      const int s = std::popcount(mask);
      acc.Add(ShapleyWeight(n, s) * (table[mask | Bit(i)] - table[mask]));
    }
    phi[i - 1] = acc.value();
  }
  return phi;
}

std::vector<double> SanchezBergantinosExact(
    int n, const OrderedCoalitionPayoff& payoff) {
  CheckGuard(n, kMaxOrderedPlayers, "sanchez-bergantinos");
  std::map<Ordering, double> memo;
  auto value = [&](const Ordering& pi) {
    auto it = memo.find(pi);
    if (it == memo.end()) it = memo.emplace(pi, payoff(pi)).first;
    return it->second;
  };
  std::vector<double> phi(n);
  for (int i = 1; i <= n; ++i) {
    CompensatedSum acc;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      if (mask & Bit(i)) continue;
      std::vector<int> members = MaskMembers(n, mask);
      const int s = static_cast<int>(members.size());
      const double weight = std::exp(LogFactorial(n - s - 1) -
                                     LogFactorial(n) - std::log(s + 1.0));
      do {
        const Ordering pi(members);
        const double base = value(pi);
        for (int k = 1; k <= s + 1; ++k) {
          acc.Add(weight * (value(InsertAt(pi, i, k)) - base));
        }
      } while (std::next_permutation(members.begin(), members.end()));
    }
    phi[i - 1] = acc.value();
  }
  return phi;
}

OmegaTable::OmegaTable(const OrderedGame& game) : n_(game.num_players()) {
  CheckGuard(n_, kMaxOrderedPlayers, "ordered game table");
  std::vector<int> line(n_);
  std::iota(line.begin(), line.end(), 1);
  do {
    orders_.emplace_back(line);
  } while (std::next_permutation(line.begin(), line.end()));

  const std::uint64_t masks = std::uint64_t{1} << n_;
  std::vector<GameQuery> queries;
  queries.reserve(masks * orders_.size());
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    const Subset coalition = Subset::FromMask(n_, mask);
    for (const Permutation& order : orders_) {
      queries.push_back({coalition, order});
    }
  }
  values_ = game.EvaluateMany(queries);
  if (values_.size() != queries.size()) {
    throw std::runtime_error("game returned a misaligned batch");
  }
}

OrdShapMatrix OrdShapExact(const OrderedGame& game) {
  return OrdShapExact(game, PositionGrouping::Identity(game.num_players()));
}

OrdShapMatrix OrdShapExact(const OrderedGame& game,
                           const PositionGrouping& grouping) {
  CheckGuard(game.num_players(), kMaxOrderedPlayers, "ordshap");
  return OrdShapExact(OmegaTable(game), grouping);
}

OrdShapMatrix OrdShapExact(const OmegaTable& table,
                           const PositionGrouping& grouping) {
  const int n = table.n();
  if (grouping.num_positions() != n) {
    throw std::invalid_argument("grouping covers " +
                                std::to_string(grouping.num_positions()) +
                                " positions, game has " + std::to_string(n));
  }
  const int columns = grouping.num_columns();
  std::vector<CompensatedSum> cells(static_cast<std::size_t>(n) * columns);
  std::vector<double> weight(n + 1);
  for (int s = 1; s <= n; ++s) weight[s] = OrdShapWeight(n, s);

  const std::uint64_t masks = std::uint64_t{1} << n;
  for (std::size_t p = 0; p < table.orders().size(); ++p) {
    const Permutation& order = table.orders()[p];
    for (std::uint64_t mask = 1; mask < masks; ++mask) {
      const int s = std::popcount(mask);
      const double with = table.at(mask, p);
      for (int i = 1; i <= n; ++i) {
        if (!(mask & Bit(i))) continue;
        const int column = grouping.ColumnOf(order.PositionOf(i));
        cells[(i - 1) * columns + (column - 1)].Add(
            weight[s] * (with - table.at(mask & ~Bit(i), p)));
      }
    }
  }
  OrdShapMatrix gamma(n, grouping);
  for (int i = 1; i <= n; ++i) {
    for (int c = 1; c <= columns; ++c) {
      gamma.set(i, c, cells[(i - 1) * columns + (c - 1)].value());
    }
  }
  return gamma;
}

std::vector<double> ValueImportance(const OrdShapMatrix& gamma) {
  std::vector<double> out(gamma.num_features());
  for (int i = 1; i <= gamma.num_features(); ++i) {
    out[i - 1] = RowValueImportance(gamma, i);
  }
  return out;
}

std::vector<double> PositionImportance(const OrdShapMatrix& gamma) {
  std::vector<double> out(gamma.num_features());
  for (int i = 1; i <= gamma.num_features(); ++i) {
    out[i - 1] = RowPositionImportance(gamma, i);
  }
  return out;
}

double OmegaHat(const OrderedGame& game, const Ordering& pi) {
  const int n = game.num_players();
  CheckGuard(n, kMaxOrderedPlayers, "omega-hat");
  const Subset members(n, pi.players());
  ConsistentExtensions extensions(pi, n);
  CompensatedSum acc;
  while (auto sigma = extensions.Next()) acc.Add(game.Evaluate(members, *sigma));
  return std::exp(LogFactorial(pi.size()) - LogFactorial(n)) * acc.value();
}

OrderedCoalitionPayoff TabulateOmegaHat(const OmegaTable& table) {
  const int n = table.n();
  std::map<Ordering, CompensatedSum> sums;
  const std::uint64_t masks = std::uint64_t{1} << n;
  for (std::size_t p = 0; p < table.orders().size(); ++p) {
    const Permutation& order = table.orders()[p];
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
      std::vector<int> restricted;
      for (int position = 1; position <= n; ++position) {
        if (mask & Bit(order.At(position))) {
          restricted.push_back(order.At(position));
        }
      }
      sums[Ordering(std::move(restricted))].Add(table.at(mask, p));
    }
  }
  auto values = std::make_shared<std::map<Ordering, double>>();
  for (const auto& [pi, sum] : sums) {
    (*values)[pi] =
        std::exp(LogFactorial(pi.size()) - LogFactorial(n)) * sum.value();
  }
  return [values](const Ordering& pi) {
    const auto it = values->find(pi);
    if (it == values->end()) {
      throw std::invalid_argument("ordering " + pi.ToString() +
                                  " outside the tabulated game");
    }
    return it->second;
  };
}

double AveragedGame(const OrderedGame& game, const Subset& coalition) {
  const int n = game.num_players();
  CheckGuard(n, kMaxOrderedPlayers, "averaged game");
  std::vector<int> line(n);
  std::iota(line.begin(), line.end(), 1);
  CompensatedSum acc;
  std::int64_t count = 0;
  do {
    acc.Add(game.Evaluate(coalition, Permutation(line)));
    ++count;
  } while (std::next_permutation(line.begin(), line.end()));
  return acc.value() / static_cast<double>(count);
}

SetPayoff TabulateAveragedGame(const OmegaTable& table) {
  const int n = table.n();
  const std::uint64_t masks = std::uint64_t{1} << n;
  auto means = std::make_shared<std::vector<double>>(masks);
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    CompensatedSum acc;
    for (std::size_t p = 0; p < table.orders().size(); ++p) {
      acc.Add(table.at(mask, p));
    }
    (*means)[mask] = acc.value() / static_cast<double>(table.orders().size());
  }
  return [means, n](const Subset& coalition) {
    std::uint64_t mask = 0;
    for (int player : coalition.Members()) mask |= Bit(player);
    if (coalition.universe() != n) {
      throw std::invalid_argument("coalition over the wrong player set");
    }
    return (*means)[mask];
  };
}

ExactReport RunExact(const OrderedGame& game,
                     const PositionGrouping& grouping) {
  const int n = game.num_players();
  CheckGuard(n, kMaxOrderedPlayers, "exact");
  const OmegaTable table(game);
  OrdShapMatrix gamma = OrdShapExact(table, grouping);

  AttributionMeta meta;
  meta.estimator = "exact";
  meta.game = game.Descriptor();
  meta.baseline = table.at(0, 0);
  meta.evaluations = static_cast<std::int64_t>(table.orders().size())
                     << n;

  ExactReport report;
  report.attribution = ResultFromMatrix(std::move(gamma), std::move(meta));
  const std::size_t identity_index = 0;  // lexicographic order starts at id
  report.shapley = ShapleyExact(n, [&](const Subset& coalition) {
    std::uint64_t mask = 0;
    for (int player : coalition.Members()) mask |= Bit(player);
    return table.at(mask, identity_index);
  });
  report.sanchez_bergantinos =
      SanchezBergantinosExact(n, TabulateOmegaHat(table));
  return report;
}

}  // namespace ordshap
