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
#include "coralab/error.h"

namespace coralab {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension:
      return "dimension";
    case ErrorCode::kCorruptMask:
      return "corrupt_mask";
    case ErrorCode::kNotFound:
      return "not_found";
    case ErrorCode::kValidation:
      return "validation";
    case ErrorCode::kConflict:
      return "conflict";
    case ErrorCode::kUnsupportedVersion:
      return "unsupported_version";
    case ErrorCode::kCorruptProject:
      return "corrupt_project";
    case ErrorCode::kBackendUnavailable:
      return "backend_unavailable";
    case ErrorCode::kBackendFailure:
      return "backend_failure";
    case ErrorCode::kUnprepared:
      return "unprepared";
    case ErrorCode::kDegenerateInput:
      return "degenerate_input";
    case ErrorCode::kImport:
      return "import";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kInjectedFault:
      return "injected_fault";
  }
  return "unknown";
}

}  // namespace coralab
