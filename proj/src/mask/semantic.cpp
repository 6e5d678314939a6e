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
#include "coralab/semantic.h"

#include <algorithm>
#include <numeric>

#include "coralab/error.h"

namespace coralab {

SemanticRaster::SemanticRaster(int w, int h, uint16_t fill)
    : width(w), height(h) {
  if (w <= 0 || h <= 0) {
    throw Error(ErrorCode::kDimension, "raster dimensions must be positive");
  }
  pixels.assign(static_cast<size_t>(w) * h, fill);
}

std::vector<size_t> PaintOrder(std::span<const LabeledInstance> instances) {
  std::vector<size_t> order(instances.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return instances[a].creation_index < instances[b].creation_index;
  });
  return order;
}

SemanticRaster FlattenToSemantic(std::span<const LabeledInstance> instances,
                                 int width, int height) {
  SemanticRaster raster(width, height);
  for (size_t idx : PaintOrder(instances)) {
    const LabeledInstance& inst = instances[idx];
    if (inst.mask.width() != width || inst.mask.height() != height) {
      throw Error(ErrorCode::kDimension,
                  "instance " + std::to_string(inst.instance_id) +
                      " mask does not match raster size");
    }
    uint16_t value = SemanticRaster::kUnassigned;
    if (inst.label_id) {
      if (*inst.label_id < 1 || *inst.label_id > SemanticRaster::kMaxLabelId) {
        throw Error(ErrorCode::kValidation, "label id out of raster range");
      }
      value = static_cast<uint16_t>(*inst.label_id);
    }
    ForEachSetPixel(inst.mask,
                    [&](int row, int col) { raster.at(row, col) = value; });
  }
  return raster;
}

SemanticRaster ToSemantic(const BinaryMask& mask) {
  SemanticRaster raster(mask.width(), mask.height());
  ForEachSetPixel(mask, [&](int row, int col) { raster.at(row, col) = 1; });
  return raster;
}

SemanticRaster ToSemantic(const BinaryRaster& raster) {
  SemanticRaster out(raster.width(), raster.height());
  for (size_t i = 0; i < out.pixels.size(); ++i) out.pixels[i] = raster.bits()[i];
  return out;
}

}  // namespace coralab
