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

// The hat/bag/glove ordered game. Items are drawn left to right; anything
// drawn before the first bag is discarded. A hat drawn after a bag is worth
// 3, a left/right glove pair drawn after a bag is worth 2, everything else is
// worth nothing.

#ifndef ORDSHAP_TOY_GAME_H_
#define ORDSHAP_TOY_GAME_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ordshap/game.h"

namespace ordshap {

enum class ToyItem { kHat, kBag, kLeftGlove, kRightGlove };

inline constexpr double kHatValue = 3.0;
inline constexpr double kGlovePairValue = 2.0;

// Accepts "Hat", "Bag", "L-Glove", "R-Glove". Throws std::invalid_argument
// on anything else.
ToyItem ParseToyItem(std::string_view name);
std::string_view ToyItemName(ToyItem item);

double ToyGamePayoff(std::span<const ToyItem> drawn);
double ToyGamePayoff(std::span<const std::string> drawn);

// [Hat, Hat, Hat, Bag, R-Glove, R-Glove].
std::vector<ToyItem> ToyReferenceSample();

// omega(S, sigma): lay the items out in sigma's order, delete the ones
// outside S and score what is left.
class ToyOrderGame : public OrderedGame {
 public:
  // Throws std::invalid_argument for an empty sequence.
  explicit ToyOrderGame(std::vector<ToyItem> items);

  int num_players() const override { return static_cast<int>(items_.size()); }
  double Evaluate(const Subset& coalition,
                  const Permutation& order) const override;
  std::string Descriptor() const override;

  const std::vector<ToyItem>& items() const { return items_; }

 private:
  std::vector<ToyItem> items_;
};

}  // namespace ordshap

#endif  // ORDSHAP_TOY_GAME_H_
