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
#include "coralab/fault.h"

#include <atomic>
#include <mutex>

#include "coralab/error.h"

namespace coralab {
namespace {

std::atomic<bool> g_armed{false};
std::mutex g_mutex;
std::string g_point;

}  // namespace

void FaultInjector::Arm(std::string point) {
  std::lock_guard lock(g_mutex);
  g_point = std::move(point);
  g_armed = true;
}

void FaultInjector::Disarm() {
  std::lock_guard lock(g_mutex);
  g_point.clear();
  g_armed = false;
}

void FaultInjector::Hit(std::string_view point) {
  if (!g_armed.load(std::memory_order_relaxed)) return;
  std::lock_guard lock(g_mutex);
  if (g_armed && g_point == point) {
    throw Error(ErrorCode::kInjectedFault,
                "injected fault at " + std::string(point));
  }
}

const std::vector<std::string>& FaultInjector::KnownPoints() {
  static const std::vector<std::string> points{
      "mutation.begin",      "mutation.after_apply", "mutation.after_validate",
      "save.after_serialize", "save.after_open",     "save.mid_write",
      "save.after_write",    "save.after_flush",     "save.after_close",
      "save.before_rename"};
  return points;
}

}  // namespace coralab
