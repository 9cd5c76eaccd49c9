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

// Permutations, ordered coalitions and subsets over the player set
// N = {1, ..., n}. Every public index and position is 1-based.

#ifndef ORDSHAP_PERMUTATION_H_
#define ORDSHAP_PERMUTATION_H_

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ordshap {

// A bijection on {1..n} in one-line notation: entry k (1-based) holds
// sigma(k), the player placed at position k. The inverse (the position of
// each player) is kept alongside since both directions are hot.
class Permutation {
 public:
  // Throws std::invalid_argument unless `one_line` is a bijection on 1..n.
  explicit Permutation(std::vector<int> one_line);
  Permutation(std::initializer_list<int> one_line)
      : Permutation(std::vector<int>(one_line)) {}

  // Throws std::invalid_argument for n == 0.
  static Permutation Identity(int n);

  int size() const { return static_cast<int>(one_line_.size()); }

  // sigma(k): the player at position k.
  int At(int position) const { return one_line_[position - 1]; }
  // sigma^{-1}(i): the position of player i.
  int PositionOf(int player) const { return positions_[player - 1]; }

  std::span<const int> one_line() const { return one_line_; }
  std::span<const int> positions() const { return positions_; }

  Permutation Inverse() const;

  std::string ToString() const;

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.one_line_ == b.one_line_;
  }

 private:
  Permutation(std::vector<int> one_line, std::vector<int> positions)
      : one_line_(std::move(one_line)), positions_(std::move(positions)) {}

  std::vector<int> one_line_;
  std::vector<int> positions_;
};

// An ordered coalition pi: a sequence of distinct players drawn from N.
// Used for permutations of a subset S (pi in S_S) and for the
// insertion/removal operators.
class Ordering {
 public:
  Ordering() = default;
  // Throws std::invalid_argument on duplicates or non-positive players.
  explicit Ordering(std::vector<int> players);
  Ordering(std::initializer_list<int> players)
      : Ordering(std::vector<int>(players)) {}

  static Ordering FromPermutation(const Permutation& p);

  int size() const { return static_cast<int>(players_.size()); }
  bool empty() const { return players_.empty(); }
  int At(int position) const { return players_[position - 1]; }
  bool Contains(int player) const;
  // 1-based position of `player`, or nullopt when absent.
  std::optional<int> PositionOf(int player) const;

  std::span<const int> players() const { return players_; }

  std::string ToString() const;

  friend bool operator==(const Ordering&, const Ordering&) = default;
  friend auto operator<=>(const Ordering&, const Ordering&) = default;

 private:
  std::vector<int> players_;
};

// A subset S of N = {1..n}.
class Subset {
 public:
  // The empty subset of {1..n}.
  explicit Subset(int n);
  // Throws std::invalid_argument for members outside 1..n or duplicates.
  Subset(int n, std::span<const int> members);
  Subset(int n, std::initializer_list<int> members)
      : Subset(n, std::span<const int>(members.begin(), members.size())) {}

  static Subset Full(int n);
  // Bit k of `mask` selects player k+1. Requires n <= 63.
  static Subset FromMask(int n, std::uint64_t mask);

  int universe() const { return static_cast<int>(flags_.size()); }
  int size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool Contains(int player) const {
    return player >= 1 && player <= universe() && flags_[player - 1] != 0;
  }

  Subset With(int player) const;
  Subset Without(int player) const;
  std::vector<int> Members() const;

  std::string ToString() const;

  friend bool operator==(const Subset&, const Subset&) = default;

 private:
  std::vector<char> flags_;
  int count_ = 0;
};

// Number of pairs (i < j) with p(i) > p(j).
std::int64_t Inversions(const Permutation& p);

// Inserts `player` into `ordering` at 1-based `position` (1..size+1).
// Throws std::invalid_argument if the player is present or the position is
// out of range.
Ordering InsertAt(const Ordering& ordering, int player, int position);

// Deletes `player`, keeping the relative order of the rest. Throws
// std::invalid_argument if absent.
Ordering Remove(const Ordering& ordering, int player);

// Number of player pairs ordered one way by `pi` and the other by `sigma`.
// Throws std::invalid_argument if pi holds a player outside sigma.
std::int64_t Disagreements(const Ordering& pi, const Permutation& sigma);

// The players placed strictly before `player` in `sigma`. Throws
// std::invalid_argument if the player is out of range.
Subset PredecessorSet(const Permutation& sigma, int player);

// Lazily enumerates every sigma in S_N with zero disagreements against `pi`
// (the n!/|S|! full orders that restrict to pi). Usage:
//
//   ConsistentExtensions ext(pi, n);
//   while (auto sigma = ext.Next()) { ... }
class ConsistentExtensions {
 public:
  // Throws std::invalid_argument if pi holds players outside 1..n.
  ConsistentExtensions(const Ordering& pi, int n);

  std::optional<Permutation> Next();

 private:
  bool Advance();

  Ordering pi_;
  int n_;
  std::vector<int> free_players_;  // N \ T(pi), permuted in place
  std::vector<char> slot_is_pi_;   // which positions hold pi's players
  bool exhausted_ = false;
  bool started_ = false;
};

// Sum over S containing i of |{sigma in S_S : sigma^{-1}(i) = position}|,
// counted by enumerating every within-subset permutation. Requires n <= 8.
std::int64_t CountPositions(int n, int player, int position);

}  // namespace ordshap

#endif  // ORDSHAP_PERMUTATION_H_
