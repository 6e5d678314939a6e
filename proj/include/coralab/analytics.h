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
#ifndef CORALAB_ANALYTICS_H_
#define CORALAB_ANALYTICS_H_

#include <cstdint>
#include <map>
#include <optional>

#include "coralab/instance.h"
#include "coralab/project.h"
#include "json.hpp"

namespace coralab {

struct LabelStats {
  int64_t pixels = 0;
  double coverage_of_image = 0.0;
  double fraction_of_coral = 0.0;
  int64_t instance_count = 0;

  friend bool operator==(const LabelStats&, const LabelStats&) = default;
};

struct HealthStats {
  int64_t pixels = 0;
  double fraction_of_coral = 0.0;
  int64_t instance_count = 0;

  friend bool operator==(const HealthStats&, const HealthStats&) = default;
};

// Coverage, label distribution and health summary for one image or for the
// whole project. Pixel counts are exact; ratios are derived from them.
// Instance counts include instances completely hidden by later ones.
struct StatsReport {
  std::optional<int> image_id;  // nullopt: project scope
  int64_t total_pixels = 0;
  int64_t coral_pixels = 0;
  double coverage = 0.0;
  std::map<int, LabelStats> per_label;
  std::map<HealthStatus, HealthStats> health;
  int64_t unassigned_pixels = 0;
  int64_t unassigned_instances = 0;

  friend bool operator==(const StatsReport&, const StatsReport&) = default;
};

StatsReport ImageStats(const Project& project, int image_id);
// Pixel-weighted: counts are summed over images before ratios are taken.
// Throws kValidation for a project without images.
StatsReport ProjectStats(const Project& project);

// Bleached (resp. Dead) coral pixels over coral pixels; 0 without coral.
double BleachingPercentage(const StatsReport& report);
double MortalityRate(const StatsReport& report);

nlohmann::json StatsToJson(const StatsReport& report, const Project& project);

}  // namespace coralab

#endif  // CORALAB_ANALYTICS_H_
