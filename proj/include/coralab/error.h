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
#ifndef CORALAB_ERROR_H_
#define CORALAB_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace coralab {

// Closed set of failure categories raised by the engine. The service layer
// maps these onto HTTP statuses and API error codes.
enum class ErrorCode {
  kDimension,
  kCorruptMask,
  kNotFound,
  kValidation,
  kConflict,
  kUnsupportedVersion,
  kCorruptProject,
  kBackendUnavailable,
  kBackendFailure,
  kUnprepared,
  kDegenerateInput,
  kImport,
  kIo,
  kInjectedFault,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace coralab

#endif  // CORALAB_ERROR_H_
