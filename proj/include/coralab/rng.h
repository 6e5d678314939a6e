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
#ifndef CORALAB_RNG_H_
#define CORALAB_RNG_H_

#include <cstdint>
#include <random>
#include <vector>

namespace coralab {

// SplitMix64 finalizer (Steele, Lea and Flood). Bijective on 64 bits.
uint64_t SplitMix64(uint64_t x);

// Seed of the per-image stream: SplitMix64(SplitMix64(seed) ^ image_id).
// Streams depend only on (seed, image id), never on processing order.
uint64_t StreamSeed(uint64_t seed, int64_t image_id);

// Simulator randomness. The engine is std::mt19937_64, whose output sequence
// is fixed by the C++ standard; bounded draws use rejection sampling rather
// than std::uniform_int_distribution, whose algorithm is library-specific.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }
  // Uniform in [0, n). n must be positive.
  uint64_t Below(uint64_t n);

 private:
  std::mt19937_64 engine_;
};

// k distinct values of [0, n) in draw order: a partial Fisher-Yates shuffle
// over a virtual identity array, storing only displaced entries.
std::vector<uint64_t> SampleWithoutReplacement(Rng& rng, uint64_t n, uint64_t k);

}  // namespace coralab

#endif  // CORALAB_RNG_H_
