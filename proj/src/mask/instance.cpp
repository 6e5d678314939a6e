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
#include "coralab/instance.h"

#include <string>

#include "coralab/error.h"

namespace coralab {

std::string_view HealthName(HealthStatus health) {
  switch (health) {
    case HealthStatus::kHealthy:
      return "Healthy";
    case HealthStatus::kBleached:
      return "Bleached";
    case HealthStatus::kDead:
      return "Dead";
    case HealthStatus::kUnspecified:
      return "Unspecified";
  }
  return "Unspecified";
}

HealthStatus ParseHealth(std::string_view name) {
  for (HealthStatus h : kAllHealthStatuses) {
    if (HealthName(h) == name) return h;
  }
  throw Error(ErrorCode::kValidation,
              "unknown health status \"" + std::string(name) + "\"");
}

std::string_view SourceName(InstanceSource source) {
  return source == InstanceSource::kAuto ? "auto" : "manual";
}

InstanceSource ParseSource(std::string_view name) {
  if (name == "auto") return InstanceSource::kAuto;
  if (name == "manual") return InstanceSource::kManual;
  throw Error(ErrorCode::kValidation,
              "unknown instance source \"" + std::string(name) + "\"");
}

}  // namespace coralab
