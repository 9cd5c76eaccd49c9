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


// Constructed ordered games with known structure, shared by the tests.

#ifndef ORDSHAP_TESTS_ORACLE_GAMES_H_
#define ORDSHAP_TESTS_ORACLE_GAMES_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ordshap/game.h"
#include "ordshap/permutation.h"

namespace ordshap::testing {

inline std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform in [-1, 1), a pure function of (seed, key).
inline double HashUnit(std::uint64_t seed, const std::vector<int>& key) {
  std::uint64_t h = Mix(seed);
  for (int v : key) h = Mix(h ^ static_cast<std::uint64_t>(v + 7919));
  return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
}

// Members of `coalition` in the order sigma places them.
inline std::vector<int> RestrictedOrder(const Subset& coalition,
                                        const Permutation& sigma) {
  std::vector<int> out;
  for (int p = 1; p <= sigma.size(); ++p) {
    if (coalition.Contains(sigma.At(p))) out.push_back(sigma.At(p));
  }
  return out;
}

// Which features are visible to a hash game, and how.
enum class HashDependence {
  kFullOrder,        // omega depends on S and all of sigma
  kCoalitionOrder,   // omega depends on the order of S's members only
};

// omega(S, sigma) is an arbitrary hashed value. With constant_empty the empty
// coalition pays `empty_value` under every order.
inline FunctionGame HashGame(int n, std::uint64_t seed,
                             HashDependence dependence,
                             bool constant_empty = false,
                             double empty_value = 0.25) {
  return FunctionGame(
      n,
      [=](const Subset& s, const Permutation& sigma) {
        if (constant_empty && s.empty()) return empty_value;
        std::vector<int> key;
        if (dependence == HashDependence::kCoalitionOrder) {
          key = RestrictedOrder(s, sigma);
          key.push_back(-1);
        } else {
          for (int m : s.Members()) key.push_back(m);
          key.push_back(-2);
          for (int v : sigma.one_line()) key.push_back(v);
        }
        return HashUnit(seed, key);
      },
      "hash/" + std::to_string(seed));
}

// omega(S, sigma) = c + sum_{i in S} a_i + b_i (sigma^{-1}(i) - (n+1)/2), so
// gamma_{i,l} = a_i + b_i (l - (n+1)/2), vi = a and pi = b.
inline FunctionGame AffineGame(std::vector<double> a, std::vector<double> b,
                               double c = 0.0) {
  const int n = static_cast<int>(a.size());
  return FunctionGame(
      n,
      [=](const Subset& s, const Permutation& sigma) {
        double v = c;
        for (int i : s.Members()) {
          v += a[i - 1] + b[i - 1] * (sigma.PositionOf(i) - (n + 1) / 2.0);
        }
        return v;
      },
      "affine");
}

// Player `null_player` never changes omega: the payoff hashes the order of
// the other members of S.
inline FunctionGame NullPlayerGame(int n, int null_player,
                                   std::uint64_t seed) {
  return FunctionGame(
      n,
      [=](const Subset& s, const Permutation& sigma) {
        std::vector<int> key =
            RestrictedOrder(s.Contains(null_player) ? s.Without(null_player)
                                                    : s,
                            sigma);
        key.push_back(-3);
        return HashUnit(seed, key);
      },
      "null");
}

// Players i and j are interchangeable: the payoff hashes the order of S with
// j relabelled as i.
inline FunctionGame SymmetricPairGame(int n, int i, int j,
                                      std::uint64_t seed) {
  return FunctionGame(
      n,
      [=](const Subset& s, const Permutation& sigma) {
        std::vector<int> key = RestrictedOrder(s, sigma);
        for (int& v : key) {
          if (v == j) v = i;
        }
        key.push_back(-4);
        return HashUnit(seed, key);
      },
      "symmetric");
}

// Pointwise sum of two games.
inline FunctionGame SumGame(const OrderedGame& left,
                            const OrderedGame& right) {
  return FunctionGame(
      left.num_players(),
      [&left, &right](const Subset& s, const Permutation& sigma) {
        return left.Evaluate(s, sigma) + right.Evaluate(s, sigma);
      },
      "sum");
}

// A game that ignores sigma.
inline FunctionGame SetGame(int n, std::function<double(const Subset&)> v) {
  return FunctionGame(
      n, [v](const Subset& s, const Permutation&) { return v(s); }, "set");
}

}  // namespace ordshap::testing

#endif  // ORDSHAP_TESTS_ORACLE_GAMES_H_
