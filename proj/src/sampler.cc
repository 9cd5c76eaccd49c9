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

#include "ordshap/sampler.h"

#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ordshap {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

SeededSampler::SeededSampler(std::uint64_t seed)
    : seed_(seed), engine_(SplitMix64(seed)) {}

SeededSampler SeededSampler::Derive(std::uint64_t stream) const {
  return SeededSampler(SplitMix64(seed_ ^ SplitMix64(stream + 1)));
}

Permutation SeededSampler::SamplePermutation(int n) {
  if (n < 1) throw std::invalid_argument("permutation size must be >= 1");
  std::vector<int> line(n);
  std::iota(line.begin(), line.end(), 1);
  for (int k = n - 1; k > 0; --k) {
    std::swap(line[k], line[UniformInt(0, k)]);
  }
  return Permutation(std::move(line));
}

int SeededSampler::UniformInt(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(engine_);
}

double SeededSampler::UniformReal() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

bool SeededSampler::CoinFlip() { return (engine_() >> 63) != 0; }

Subset SampleProperSubset(SeededSampler& sampler, int n) {
  if (n < 2) throw std::invalid_argument("proper subsets need n >= 2");
  while (true) {
    std::vector<int> members;
    for (int k = 1; k <= n; ++k) {
      if (sampler.CoinFlip()) members.push_back(k);
    }
    const int size = static_cast<int>(members.size());
    if (size > 0 && size < n) return Subset(n, members);
  }
}

}  // namespace ordshap
