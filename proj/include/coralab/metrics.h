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
#ifndef CORALAB_METRICS_H_
#define CORALAB_METRICS_H_

#include "coralab/mask.h"
#include "coralab/semantic.h"

namespace coralab {

// Binary coral/non-coral comparisons. Both throw kDimension on size
// mismatch. Accuracy counts agreeing pixels; MAE sums |y - y_hat| over
// pixels, so MAE == 1 - accuracy up to rounding.
double PixelAccuracy(const BinaryMask& pred, const BinaryMask& gt);
double Mae(const BinaryMask& pred, const BinaryMask& gt);

// Raster forms: any non-background value counts as coral.
double PixelAccuracy(const SemanticRaster& pred, const SemanticRaster& gt);
double Mae(const SemanticRaster& pred, const SemanticRaster& gt);

}  // namespace coralab

#endif  // CORALAB_METRICS_H_
