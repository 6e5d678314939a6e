/* Copyright 2026 The Coralab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "coralab/rng.h"

#include <unordered_map>

#include "coralab/error.h"

namespace coralab {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t StreamSeed(uint64_t seed, int64_t image_id) {
  return SplitMix64(SplitMix64(seed) ^ static_cast<uint64_t>(image_id));
}

uint64_t Rng::Below(uint64_t n) {
  // Values below 2^64 mod n would bias the low residues.
  const uint64_t threshold = (0 - n) % n;
  for (;;) {
    const uint64_t x = engine_();
    if (x >= threshold) return x % n;
  }
}

std::vector<uint64_t> SampleWithoutReplacement(Rng& rng, uint64_t n, uint64_t k) {
  if (k > n) {
    throw Error(ErrorCode::kValidation, "cannot draw " + std::to_string(k) +
                                            " distinct values from " +
                                            std::to_string(n));
  }
  std::unordered_map<uint64_t, uint64_t> displaced;
  auto value_at = [&](uint64_t i) {
    auto it = displaced.find(i);
    return it == displaced.end() ? i : it->second;
  };
  std::vector<uint64_t> out;
  out.reserve(k);
  for (uint64_t i = 0; i < k; ++i) {
    const uint64_t j = i + rng.Below(n - i);
    const uint64_t vi = value_at(i);
    const uint64_t vj = value_at(j);
    out.push_back(vj);
    displaced[j] = vi;
  }
  return out;
}

}  // namespace coralab
