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
#ifndef CORALAB_FAULT_H_
#define CORALAB_FAULT_H_

#include <string>
#include <string_view>
#include <vector>

namespace coralab {

// Named failure points compiled into the mutation and save paths. Tests arm
// one point; when execution reaches it an Error(kInjectedFault) is thrown.
class FaultInjector {
 public:
  static void Arm(std::string point);
  static void Disarm();
  // Throws when `point` is armed. Cheap when nothing is armed.
  static void Hit(std::string_view point);

  // Every point compiled into the mutation path, in execution order.
  static const std::vector<std::string>& KnownPoints();
};

// Arms a point for the lifetime of the guard.
class ScopedFault {
 public:
  explicit ScopedFault(std::string point) { FaultInjector::Arm(std::move(point)); }
  ~ScopedFault() { FaultInjector::Disarm(); }
  ScopedFault(const ScopedFault&) = delete;
  ScopedFault& operator=(const ScopedFault&) = delete;
};

}  // namespace coralab

#endif  // CORALAB_FAULT_H_
