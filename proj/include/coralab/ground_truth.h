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
#ifndef CORALAB_GROUND_TRUTH_H_
#define CORALAB_GROUND_TRUTH_H_

#include <string>
#include <vector>

#include "coralab/mask.h"

namespace coralab {

// Reference coral instances for one image. Instances may overlap; their
// union defines the coral class.
struct GroundTruth {
  int image_id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
  std::vector<BinaryMask> instances;

  // Throws kDimension when an instance does not match width x height.
  void Validate() const;
  BinaryMask CoralUnion() const;
  int64_t pixel_count() const { return int64_t{width} * height; }
};

}  // namespace coralab

#endif  // CORALAB_GROUND_TRUTH_H_
