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

#include "ordshap/toy_game.h"

#include <algorithm>
#include <stdexcept>

namespace ordshap {

ToyItem ParseToyItem(std::string_view name) {
  if (name == "Hat") return ToyItem::kHat;
  if (name == "Bag") return ToyItem::kBag;
  if (name == "L-Glove") return ToyItem::kLeftGlove;
  if (name == "R-Glove") return ToyItem::kRightGlove;
  throw std::invalid_argument("unknown toy item '" + std::string(name) + "'");
}

std::string_view ToyItemName(ToyItem item) {
  switch (item) {
    case ToyItem::kHat:
      return "Hat";
    case ToyItem::kBag:
      return "Bag";
    case ToyItem::kLeftGlove:
      return "L-Glove";
    case ToyItem::kRightGlove:
      return "R-Glove";
  }
  return "?";
}

double ToyGamePayoff(std::span<const ToyItem> drawn) {
  bool bag_seen = false;
  int hats = 0;
  int left = 0;
  int right = 0;
  for (ToyItem item : drawn) {
    if (item == ToyItem::kBag) {
      bag_seen = true;
      continue;
    }
    if (!bag_seen) continue;
    switch (item) {
      case ToyItem::kHat:
        ++hats;
        break;
      case ToyItem::kLeftGlove:
        ++left;
        break;
      case ToyItem::kRightGlove:
        ++right;
        break;
      case ToyItem::kBag:
        break;
    }
  }
  return kHatValue * hats + kGlovePairValue * std::min(left, right);
}

double ToyGamePayoff(std::span<const std::string> drawn) {
  std::vector<ToyItem> items;
  items.reserve(drawn.size());
  for (const std::string& name : drawn) items.push_back(ParseToyItem(name));
  return ToyGamePayoff(items);
}

std::vector<ToyItem> ToyReferenceSample() {
  return {ToyItem::kHat,       ToyItem::kHat,        ToyItem::kHat,
          ToyItem::kBag,       ToyItem::kRightGlove, ToyItem::kRightGlove};
}

ToyOrderGame::ToyOrderGame(std::vector<ToyItem> items)
    : items_(std::move(items)) {
  if (items_.empty()) throw std::invalid_argument("toy game needs items");
}

double ToyOrderGame::Evaluate(const Subset& coalition,
                              const Permutation& order) const {
  std::vector<ToyItem> drawn;
  drawn.reserve(coalition.size());
  for (int position = 1; position <= order.size(); ++position) {
    const int player = order.At(position);
    if (coalition.Contains(player)) drawn.push_back(items_[player - 1]);
  }
  return ToyGamePayoff(drawn);
}

std::string ToyOrderGame::Descriptor() const {
  std::string out = "toy[";
  for (std::size_t k = 0; k < items_.size(); ++k) {
    if (k > 0) out += ',';
    out += ToyItemName(items_[k]);
  }
  return out + "]";
}

}  // namespace ordshap
