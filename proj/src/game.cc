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

#include "ordshap/game.h"

#include <stdexcept>
#include <utility>

namespace ordshap {

std::vector<double> OrderedGame::EvaluateMany(
    std::span<const GameQuery> queries) const {
  std::vector<double> out;
  out.reserve(queries.size());
  for (const GameQuery& q : queries) {
    out.push_back(Evaluate(q.coalition, q.order));
  }
  return out;
}

FunctionGame::FunctionGame(int num_players, OrderedPayoff payoff,
                           std::string descriptor)
    : num_players_(num_players),
      payoff_(std::move(payoff)),
      descriptor_(std::move(descriptor)) {
  if (num_players < 1) throw std::invalid_argument("game needs >= 1 player");
}

SetPayoff IdentityOrderRestriction(const OrderedGame& game) {
  const Permutation identity = Permutation::Identity(game.num_players());
  return [&game, identity](const Subset& coalition) {
    return game.Evaluate(coalition, identity);
  };
}

}  // namespace ordshap
