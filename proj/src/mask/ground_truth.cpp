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
#include "coralab/ground_truth.h"

#include "coralab/error.h"

namespace coralab {

void GroundTruth::Validate() const {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kDimension, "ground truth dimensions must be positive");
  }
  for (const BinaryMask& m : instances) {
    if (m.width() != width || m.height() != height) {
      throw Error(ErrorCode::kDimension,
                  "ground-truth instance size does not match image " +
                      std::to_string(image_id));
    }
  }
}

BinaryMask GroundTruth::CoralUnion() const {
  Validate();
  BinaryMask out = BinaryMask::Empty(width, height);
  for (const BinaryMask& m : instances) out = MaskBoolean(out, m, BooleanOp::kUnion);
  return out;
}

}  // namespace coralab
