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

#include "ordshap/permutation.h"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ordshap {
namespace {

std::string JoinTuple(std::span<const int> values) {
  std::ostringstream out;
  out << '(';
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) out << ',';
    out << values[k];
  }
  out << ')';
  return out.str();
}

}  // namespace

Permutation::Permutation(std::vector<int> one_line)
    : one_line_(std::move(one_line)) {
  const int n = size();
  if (n == 0) throw std::invalid_argument("permutation must be non-empty");
  positions_.assign(n, 0);
  for (int k = 0; k < n; ++k) {
    const int player = one_line_[k];
    if (player < 1 || player > n || positions_[player - 1] != 0) {
      throw std::invalid_argument("not a bijection on 1..n: " +
                                  JoinTuple(one_line_));
    }
    positions_[player - 1] = k + 1;
  }
}

Permutation Permutation::Identity(int n) {
  if (n < 1) throw std::invalid_argument("identity requires n >= 1");
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  return Permutation(v, v);
}

Permutation Permutation::Inverse() const {
  return Permutation(positions_, one_line_);
}

std::string Permutation::ToString() const { return JoinTuple(one_line_); }

Ordering::Ordering(std::vector<int> players) : players_(std::move(players)) {
  std::vector<int> sorted = players_;
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.front() < 1) {
    throw std::invalid_argument("players are 1-based: " + ToString());
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("duplicate player in ordering " + ToString());
  }
}

Ordering Ordering::FromPermutation(const Permutation& p) {
  return Ordering(std::vector<int>(p.one_line().begin(), p.one_line().end()));
}

bool Ordering::Contains(int player) const {
  return std::find(players_.begin(), players_.end(), player) != players_.end();
}

std::optional<int> Ordering::PositionOf(int player) const {
  auto it = std::find(players_.begin(), players_.end(), player);
  if (it == players_.end()) return std::nullopt;
  return static_cast<int>(it - players_.begin()) + 1;
}

std::string Ordering::ToString() const { return JoinTuple(players_); }

Subset::Subset(int n) : flags_(n, 0) {
  if (n < 0) throw std::invalid_argument("negative universe size");
}

Subset::Subset(int n, std::span<const int> members) : Subset(n) {
  for (int player : members) {
    if (player < 1 || player > n) {
      throw std::invalid_argument("subset member " + std::to_string(player) +
                                  " outside 1.." + std::to_string(n));
    }
    if (flags_[player - 1]) {
      throw std::invalid_argument("duplicate subset member " +
                                  std::to_string(player));
    }
    flags_[player - 1] = 1;
    ++count_;
  }
}

Subset Subset::Full(int n) {
  Subset s(n);
  std::fill(s.flags_.begin(), s.flags_.end(), 1);
  s.count_ = n;
  return s;
}

Subset Subset::FromMask(int n, std::uint64_t mask) {
  if (n > 63) throw std::invalid_argument("FromMask requires n <= 63");
  Subset s(n);
  for (int k = 0; k < n; ++k) {
    if ((mask >> k) & 1u) {
      s.flags_[k] = 1;
      ++s.count_;
    }
  }
  return s;
}

Subset Subset::With(int player) const {
  Subset s = *this;
  if (!s.flags_.at(player - 1)) {
    s.flags_[player - 1] = 1;
    ++s.count_;
  }
  return s;
}

Subset Subset::Without(int player) const {
  Subset s = *this;
  if (s.flags_.at(player - 1)) {
    s.flags_[player - 1] = 0;
    --s.count_;
  }
  return s;
}

std::vector<int> Subset::Members() const {
  std::vector<int> out;
  out.reserve(count_);
  for (int k = 0; k < universe(); ++k) {
    if (flags_[k]) out.push_back(k + 1);
  }
  return out;
}

std::string Subset::ToString() const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (int player : Members()) {
    if (!first) out << ',';
    out << player;
    first = false;
  }
  out << '}';
  return out.str();
}

std::int64_t Inversions(const Permutation& p) {
  std::int64_t count = 0;
  const auto line = p.one_line();
  for (std::size_t i = 0; i < line.size(); ++i) {
    for (std::size_t j = i + 1; j < line.size(); ++j) {
      if (line[i] > line[j]) ++count;
    }
  }
  return count;
}

Ordering InsertAt(const Ordering& ordering, int player, int position) {
  if (ordering.Contains(player)) {
    throw std::invalid_argument("player " + std::to_string(player) +
                                " already in " + ordering.ToString());
  }
  if (position < 1 || position > ordering.size() + 1) {
    throw std::invalid_argument("insert position " + std::to_string(position) +
                                " outside 1.." +
                                std::to_string(ordering.size() + 1));
  }
  std::vector<int> players(ordering.players().begin(),
                           ordering.players().end());
  players.insert(players.begin() + (position - 1), player);
  return Ordering(std::move(players));
}

Ordering Remove(const Ordering& ordering, int player) {
  const auto position = ordering.PositionOf(player);
  if (!position) {
    throw std::invalid_argument("player " + std::to_string(player) +
                                " not in " + ordering.ToString());
  }
  std::vector<int> players(ordering.players().begin(),
                           ordering.players().end());
  players.erase(players.begin() + (*position - 1));
  return Ordering(std::move(players));
}

std::int64_t Disagreements(const Ordering& pi, const Permutation& sigma) {
  std::vector<int> where;
  where.reserve(pi.size());
  for (int player : pi.players()) {
    if (player > sigma.size()) {
      throw std::invalid_argument("player " + std::to_string(player) +
                                  " absent from " + sigma.ToString());
    }
    where.push_back(sigma.PositionOf(player));
  }
  std::int64_t count = 0;
  for (std::size_t a = 0; a < where.size(); ++a) {
    for (std::size_t b = a + 1; b < where.size(); ++b) {
      if (where[a] > where[b]) ++count;
    }
  }
  return count;
}

Subset PredecessorSet(const Permutation& sigma, int player) {
  if (player < 1 || player > sigma.size()) {
    throw std::invalid_argument("player " + std::to_string(player) +
                                " absent from " + sigma.ToString());
  }
  const int position = sigma.PositionOf(player);
  Subset out(sigma.size());
  for (int k = 1; k < position; ++k) out = out.With(sigma.At(k));
  return out;
}

ConsistentExtensions::ConsistentExtensions(const Ordering& pi, int n)
    : pi_(pi), n_(n) {
  if (n < 1) throw std::invalid_argument("ambient size must be >= 1");
  std::vector<char> used(n, 0);
  for (int player : pi.players()) {
    if (player > n) {
      throw std::invalid_argument("player " + std::to_string(player) +
                                  " outside 1.." + std::to_string(n));
    }
    used[player - 1] = 1;
  }
  for (int k = 1; k <= n; ++k) {
    if (!used[k - 1]) free_players_.push_back(k);
  }
  // Descending pattern so prev_permutation walks every slot choice once.
  slot_is_pi_.assign(n, 0);
  std::fill(slot_is_pi_.begin(), slot_is_pi_.begin() + pi.size(), 1);
}

bool ConsistentExtensions::Advance() {
  if (std::next_permutation(free_players_.begin(), free_players_.end())) {
    return true;
  }
  return std::prev_permutation(slot_is_pi_.begin(), slot_is_pi_.end());
}

std::optional<Permutation> ConsistentExtensions::Next() {
  if (exhausted_) return std::nullopt;
  if (started_ && !Advance()) {
    exhausted_ = true;
    return std::nullopt;
  }
  started_ = true;
  std::vector<int> line(n_);
  int next_pi = 0;
  int next_free = 0;
  for (int k = 0; k < n_; ++k) {
    line[k] = slot_is_pi_[k] ? pi_.players()[next_pi++]
                             : free_players_[next_free++];
  }
  return Permutation(std::move(line));
}

std::int64_t CountPositions(int n, int player, int position) {
  if (n < 1 || n > 8) {
    throw std::invalid_argument("CountPositions enumerates; requires 1<=n<=8");
  }
  if (player < 1 || player > n || position < 1 || position > n) {
    throw std::invalid_argument("player and position must lie in 1..n");
  }
  std::int64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (!((mask >> (player - 1)) & 1u)) continue;
    std::vector<int> members = Subset::FromMask(n, mask).Members();
    do {
      const auto it = std::find(members.begin(), members.end(), player);
      if (it - members.begin() + 1 == position) ++count;
    } while (std::next_permutation(members.begin(), members.end()));
  }
  return count;
}

}  // namespace ordshap
