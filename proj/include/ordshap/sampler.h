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

#ifndef ORDSHAP_SAMPLER_H_
#define ORDSHAP_SAMPLER_H_

#include <cstdint>
#include <random>

#include "ordshap/permutation.h"

namespace ordshap {

// Seeded pseudo-random source. Equal seeds and equal call sequences give
// equal outputs. Single owner: use Derive() to hand independent streams to
// workers instead of sharing one instance.
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  // Independent stream keyed by (seed, stream); does not advance *this.
  SeededSampler Derive(std::uint64_t stream) const;

  // Uniform over S_n (Fisher-Yates). Throws std::invalid_argument for n < 1.
  Permutation SamplePermutation(int n);

  // Uniform integer in [lo, hi].
  int UniformInt(int lo, int hi);
  // Uniform real in [0, 1).
  double UniformReal();
  bool CoinFlip();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Uniform draw from P(N) \ {empty, N} by rejection. Requires n >= 2.
Subset SampleProperSubset(SeededSampler& sampler, int n);

}  // namespace ordshap

#endif  // ORDSHAP_SAMPLER_H_
