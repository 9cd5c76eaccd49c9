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

// Brute-force reference values. Everything here enumerates subsets and/or
// permutations outright and is meant as an oracle for small games, never as
// a production path: the size guards throw instead of degrading.

#ifndef ORDSHAP_EXACT_H_
#define ORDSHAP_EXACT_H_

#include <stdexcept>
#include <vector>

#include "ordshap/attribution.h"
#include "ordshap/game.h"

namespace ordshap {

// Bound for enumerations over 2^n * n! (subset, order) pairs.
inline constexpr int kMaxOrderedPlayers = 6;
// Bound for enumerations over 2^n subsets only.
inline constexpr int kMaxSetPlayers = 12;

class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Classical Shapley values of a set game on n players. Guard: n <= 12.
std::vector<double> ShapleyExact(int n, const SetPayoff& payoff);

// Sanchez-Bergantinos values of a game over ordered coalitions. Guard: n <= 6.
std::vector<double> SanchezBergantinosExact(
    int n, const OrderedCoalitionPayoff& payoff);

// omega evaluated on every (S, sigma), sigma in lexicographic order.
class OmegaTable {
 public:
  // Guard: n <= 6.
  explicit OmegaTable(const OrderedGame& game);

  int n() const { return n_; }
  const std::vector<Permutation>& orders() const { return orders_; }
  double at(std::uint64_t mask, std::size_t order_index) const {
    return values_[mask * orders_.size() + order_index];
  }

 private:
  int n_;
  std::vector<Permutation> orders_;
  std::vector<double> values_;
};

// gamma_{i,l}: feature i's importance conditioned on being permuted to
// position label l. Guard: n <= 6.
OrdShapMatrix OrdShapExact(const OrderedGame& game);
OrdShapMatrix OrdShapExact(const OrderedGame& game,
                           const PositionGrouping& grouping);
OrdShapMatrix OrdShapExact(const OmegaTable& table,
                           const PositionGrouping& grouping);

// Row means (value importance).
std::vector<double> ValueImportance(const OrdShapMatrix& gamma);
// Row slopes against centered position (position importance). Throws
// std::invalid_argument for fewer than two positions.
std::vector<double> PositionImportance(const OrdShapMatrix& gamma);

// omega-hat(pi) = |S|!/n! * sum of omega(T(pi), sigma) over the full orders
// sigma that agree with pi. Guard: n <= 6.
double OmegaHat(const OrderedGame& game, const Ordering& pi);
// Same quantity for every ordered coalition, tabulated once.
OrderedCoalitionPayoff TabulateOmegaHat(const OmegaTable& table);

// nu-bar(S): mean of omega(S, sigma) over all sigma in S_N. Guard: n <= 6.
double AveragedGame(const OrderedGame& game, const Subset& coalition);
SetPayoff TabulateAveragedGame(const OmegaTable& table);

// Full exact bundle: gamma, value/position importance, plus the classical
// Shapley values of the identity-order set game and the SB values of the
// omega-hat game.
struct ExactReport {
  AttributionResult attribution;
  std::vector<double> shapley;
  std::vector<double> sanchez_bergantinos;
};

ExactReport RunExact(const OrderedGame& game, const PositionGrouping& grouping);

}  // namespace ordshap

#endif  // ORDSHAP_EXACT_H_
