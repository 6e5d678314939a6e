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
#ifndef CORALAB_SEMANTIC_H_
#define CORALAB_SEMANTIC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "coralab/instance.h"
#include "coralab/mask.h"

namespace coralab {

// Per-pixel label raster, row-major. 0 is background, kUnassigned marks
// segmented coral without a label, label ids occupy 1..kMaxLabelId.
struct SemanticRaster {
  static constexpr uint16_t kBackground = 0;
  static constexpr uint16_t kUnassigned = 0xFFFF;
  static constexpr int kMaxLabelId = 0xFFFE;

  int width = 0;
  int height = 0;
  std::vector<uint16_t> pixels;

  SemanticRaster() = default;
  SemanticRaster(int w, int h, uint16_t fill = kBackground);

  uint16_t at(int row, int col) const {
    return pixels[static_cast<size_t>(row) * width + col];
  }
  uint16_t& at(int row, int col) {
    return pixels[static_cast<size_t>(row) * width + col];
  }

  friend bool operator==(const SemanticRaster&,
                         const SemanticRaster&) = default;
};

// Indices of `instances` in painting order: ascending creation_index, ties
// kept in sequence order.
std::vector<size_t> PaintOrder(std::span<const LabeledInstance> instances);

// Paints instances in creation order; later instances override earlier ones.
SemanticRaster FlattenToSemantic(std::span<const LabeledInstance> instances,
                                 int width, int height);

// Binary coral/non-coral raster (values 0/1).
SemanticRaster ToSemantic(const BinaryMask& mask);
SemanticRaster ToSemantic(const BinaryRaster& raster);

// Calls fn(row, col) for every set pixel of the mask.
template <typename Fn>
void ForEachSetPixel(const BinaryMask& mask, Fn&& fn) {
  const int64_t h = mask.height();
  int64_t pos = 0;
  bool value = false;
  for (uint32_t run : mask.counts()) {
    if (value) {
      for (int64_t p = pos; p < pos + run; ++p) {
        fn(static_cast<int>(p % h), static_cast<int>(p / h));
      }
    }
    pos += run;
    value = !value;
  }
}

}  // namespace coralab

#endif  // CORALAB_SEMANTIC_H_
