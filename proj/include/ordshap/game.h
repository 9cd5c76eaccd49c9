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

#ifndef ORDSHAP_GAME_H_
#define ORDSHAP_GAME_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ordshap/permutation.h"

namespace ordshap {

// One evaluation point (S, sigma) of an ordered game.
struct GameQuery {
  Subset coalition;
  Permutation order;
};

// Characteristic function omega(S, sigma) over subsets of N and full orders
// of N. Implementations must be safe to evaluate from several threads.
class OrderedGame {
 public:
  virtual ~OrderedGame() = default;

  virtual int num_players() const = 0;
  virtual double Evaluate(const Subset& coalition,
                          const Permutation& order) const = 0;
  // Outputs aligned with `queries`. Model-backed games override this to
  // batch and deduplicate.
  virtual std::vector<double> EvaluateMany(
      std::span<const GameQuery> queries) const;
  virtual std::string Descriptor() const = 0;
};

using OrderedPayoff =
    std::function<double(const Subset& coalition, const Permutation& order)>;

// Adapts a callable into an OrderedGame.
class FunctionGame : public OrderedGame {
 public:
  FunctionGame(int num_players, OrderedPayoff payoff,
               std::string descriptor = "function");

  int num_players() const override { return num_players_; }
  double Evaluate(const Subset& coalition,
                  const Permutation& order) const override {
    return payoff_(coalition, order);
  }
  std::string Descriptor() const override { return descriptor_; }

 private:
  int num_players_;
  OrderedPayoff payoff_;
  std::string descriptor_;
};

// Classical set game nu(S).
using SetPayoff = std::function<double(const Subset& coalition)>;

// Game over ordered coalitions omega-hat(pi), pi in S_S for S subset of N.
using OrderedCoalitionPayoff = std::function<double(const Ordering& pi)>;

// nu(S) = omega(S, identity): the set game the ordered game reduces to when
// the order is pinned to the original one.
SetPayoff IdentityOrderRestriction(const OrderedGame& game);

}  // namespace ordshap

#endif  // ORDSHAP_GAME_H_
