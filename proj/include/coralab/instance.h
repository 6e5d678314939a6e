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
#ifndef CORALAB_INSTANCE_H_
#define CORALAB_INSTANCE_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include "coralab/mask.h"

namespace coralab {

enum class HealthStatus { kHealthy, kBleached, kDead, kUnspecified };

inline constexpr HealthStatus kAllHealthStatuses[] = {
    HealthStatus::kHealthy, HealthStatus::kBleached, HealthStatus::kDead,
    HealthStatus::kUnspecified};

std::string_view HealthName(HealthStatus health);
// Accepts the names produced by HealthName; throws kValidation otherwise.
HealthStatus ParseHealth(std::string_view name);

enum class InstanceSource { kAuto, kManual };

std::string_view SourceName(InstanceSource source);
InstanceSource ParseSource(std::string_view name);

// One annotated coral colony on one image.
struct LabeledInstance {
  int64_t instance_id = 0;
  BinaryMask mask;
  std::optional<int> label_id;  // nullopt: not yet labelled
  HealthStatus health = HealthStatus::kUnspecified;
  double confidence = 1.0;
  InstanceSource source = InstanceSource::kManual;
  int64_t creation_index = 0;

  friend bool operator==(const LabeledInstance&,
                         const LabeledInstance&) = default;
};

}  // namespace coralab

#endif  // CORALAB_INSTANCE_H_
