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
#include <filesystem>

#include "coralab/backend.h"
#include "coralab/coco.h"
#include "coralab/error.h"
#include "coralab/oracle_backend.h"
#include "coralab/subprocess_backend.h"

namespace coralab {

std::unique_ptr<SegmentationBackend> MakeBackend(
    const BackendDescriptor& descriptor) {
  if (descriptor.kind == BackendDescriptor::Kind::kSubprocess) {
    return std::make_unique<SubprocessBackend>(descriptor.command);
  }
  const auto& source = descriptor.ground_truth;
  if (std::filesystem::is_directory(source)) {
    return OracleBackend::FromPngDirectory(source, descriptor.erosion_radius);
  }
  if (!std::filesystem::exists(source)) {
    throw Error(ErrorCode::kBackendUnavailable,
                "oracle ground truth not found: " + source.string());
  }
  return std::make_unique<OracleBackend>(ImportCoco(source).ToGroundTruth(),
                                         descriptor.erosion_radius);
}

}  // namespace coralab
