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
#include "coralab/metrics.h"

#include <cstdlib>

#include "coralab/error.h"

namespace coralab {
namespace {

void CheckSameSize(int w1, int h1, int w2, int h2) {
  if (w1 != w2 || h1 != h2) {
    throw Error(ErrorCode::kDimension, "prediction and ground truth differ in size");
  }
}

}  // namespace

double PixelAccuracy(const BinaryMask& pred, const BinaryMask& gt) {
  CheckSameSize(pred.width(), pred.height(), gt.width(), gt.height());
  const int64_t n = int64_t{gt.width()} * gt.height();
  const int64_t true_pos = MaskArea(MaskBoolean(pred, gt, BooleanOp::kIntersection));
  const int64_t true_neg = n - MaskArea(MaskBoolean(pred, gt, BooleanOp::kUnion));
  return static_cast<double>(true_pos + true_neg) / static_cast<double>(n);
}

double Mae(const BinaryMask& pred, const BinaryMask& gt) {
  CheckSameSize(pred.width(), pred.height(), gt.width(), gt.height());
  const int64_t n = int64_t{gt.width()} * gt.height();
  return static_cast<double>(MaskArea(MaskBoolean(pred, gt, BooleanOp::kXor))) /
         static_cast<double>(n);
}

double PixelAccuracy(const SemanticRaster& pred, const SemanticRaster& gt) {
  CheckSameSize(pred.width, pred.height, gt.width, gt.height);
  int64_t matches = 0;
  for (size_t i = 0; i < gt.pixels.size(); ++i) {
    const bool p = pred.pixels[i] != SemanticRaster::kBackground;
    const bool g = gt.pixels[i] != SemanticRaster::kBackground;
    matches += p == g;
  }
  return static_cast<double>(matches) / static_cast<double>(gt.pixels.size());
}

double Mae(const SemanticRaster& pred, const SemanticRaster& gt) {
  CheckSameSize(pred.width, pred.height, gt.width, gt.height);
  int64_t sum = 0;
  for (size_t i = 0; i < gt.pixels.size(); ++i) {
    const int y = gt.pixels[i] != SemanticRaster::kBackground;
    const int y_hat = pred.pixels[i] != SemanticRaster::kBackground;
    sum += std::abs(y - y_hat);
  }
  return static_cast<double>(sum) / static_cast<double>(gt.pixels.size());
}

}  // namespace coralab
