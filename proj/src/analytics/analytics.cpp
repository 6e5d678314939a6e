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
#include "coralab/analytics.h"

#include <vector>

#include "coralab/error.h"
#include "coralab/semantic.h"

namespace coralab {
namespace {

// Raw counts shared by the image and project reports.
struct Tally {
  int64_t total_pixels = 0;
  int64_t coral_pixels = 0;
  std::map<int, int64_t> label_pixels;
  std::map<int, int64_t> label_instances;
  std::map<HealthStatus, int64_t> health_pixels;
  std::map<HealthStatus, int64_t> health_instances;
  int64_t unassigned_pixels = 0;
  int64_t unassigned_instances = 0;

  void Add(const Tally& other) {
    total_pixels += other.total_pixels;
    coral_pixels += other.coral_pixels;
    for (auto [k, v] : other.label_pixels) label_pixels[k] += v;
    for (auto [k, v] : other.label_instances) label_instances[k] += v;
    for (auto [k, v] : other.health_pixels) health_pixels[k] += v;
    for (auto [k, v] : other.health_instances) health_instances[k] += v;
    unassigned_pixels += other.unassigned_pixels;
    unassigned_instances += other.unassigned_instances;
  }
};

double Ratio(int64_t num, int64_t den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

Tally TallyImage(const Project& project, int image_id) {
  const ImageEntry& image = FindImage(project, image_id);
  const auto instances = InstancesOf(project, image_id);
  Tally t;
  t.total_pixels = int64_t{image.width} * image.height;

  // Owner raster: index of the instance painted last at each pixel, so the
  // label and health rasters follow the same overlap order.
  constexpr int32_t kNone = -1;
  std::vector<int32_t> owner(static_cast<size_t>(t.total_pixels), kNone);
  for (size_t idx : PaintOrder(instances)) {
    const LabeledInstance& inst = instances[idx];
    if (inst.mask.width() != image.width || inst.mask.height() != image.height) {
      throw Error(ErrorCode::kDimension, "instance mask does not match image");
    }
    ForEachSetPixel(inst.mask, [&](int row, int col) {
      owner[static_cast<size_t>(row) * image.width + col] =
          static_cast<int32_t>(idx);
    });
  }
  std::vector<int64_t> owned(instances.size(), 0);
  for (int32_t o : owner) {
    if (o != kNone) ++owned[static_cast<size_t>(o)];
  }
  for (size_t i = 0; i < instances.size(); ++i) {
    const LabeledInstance& inst = instances[i];
    t.coral_pixels += owned[i];
    if (inst.label_id) {
      t.label_pixels[*inst.label_id] += owned[i];
      ++t.label_instances[*inst.label_id];
    } else {
      t.unassigned_pixels += owned[i];
      ++t.unassigned_instances;
    }
    t.health_pixels[inst.health] += owned[i];
    ++t.health_instances[inst.health];
  }
  return t;
}

StatsReport FromTally(const Tally& t, std::optional<int> image_id) {
  StatsReport r;
  r.image_id = image_id;
  r.total_pixels = t.total_pixels;
  r.coral_pixels = t.coral_pixels;
  r.coverage = Ratio(t.coral_pixels, t.total_pixels);
  for (auto [label, count] : t.label_instances) {
    const int64_t px = t.label_pixels.at(label);
    r.per_label[label] = LabelStats{px, Ratio(px, t.total_pixels),
                                    Ratio(px, t.coral_pixels), count};
  }
  for (auto [health, count] : t.health_instances) {
    const int64_t px = t.health_pixels.at(health);
    r.health[health] = HealthStats{px, Ratio(px, t.coral_pixels), count};
  }
  r.unassigned_pixels = t.unassigned_pixels;
  r.unassigned_instances = t.unassigned_instances;
  return r;
}

double HealthFraction(const StatsReport& report, HealthStatus h) {
  auto it = report.health.find(h);
  if (it == report.health.end()) return 0.0;
  return Ratio(it->second.pixels, report.coral_pixels);
}

}  // namespace

StatsReport ImageStats(const Project& project, int image_id) {
  return FromTally(TallyImage(project, image_id), image_id);
}

StatsReport ProjectStats(const Project& project) {
  if (project.images.empty()) {
    throw Error(ErrorCode::kValidation, "project has no images");
  }
  Tally total;
  for (const ImageEntry& image : project.images) {
    total.Add(TallyImage(project, image.id));
  }
  return FromTally(total, std::nullopt);
}

double BleachingPercentage(const StatsReport& report) {
  return HealthFraction(report, HealthStatus::kBleached);
}

double MortalityRate(const StatsReport& report) {
  return HealthFraction(report, HealthStatus::kDead);
}

nlohmann::json StatsToJson(const StatsReport& report, const Project& project) {
  using nlohmann::json;
  json labels = json::array();
  for (const auto& [id, s] : report.per_label) {
    std::string name;
    for (const Label& l : project.labels) {
      if (l.id == id) name = l.name;
    }
    labels.push_back({{"label_id", id},
                      {"name", name},
                      {"pixels", s.pixels},
                      {"coverage_of_image", s.coverage_of_image},
                      {"fraction_of_coral", s.fraction_of_coral},
                      {"instance_count", s.instance_count}});
  }
  json health = json::array();
  for (const auto& [h, s] : report.health) {
    health.push_back({{"status", HealthName(h)},
                      {"pixels", s.pixels},
                      {"fraction_of_coral", s.fraction_of_coral},
                      {"instance_count", s.instance_count}});
  }
  return json{
      {"scope", report.image_id ? "image" : "project"},
      {"image_id", report.image_id ? json(*report.image_id) : json(nullptr)},
      {"total_pixels", report.total_pixels},
      {"coral_pixels", report.coral_pixels},
      {"coverage", report.coverage},
      {"per_label", std::move(labels)},
      {"unassigned", {{"pixels", report.unassigned_pixels},
                      {"instance_count", report.unassigned_instances}}},
      {"health", std::move(health)},
      {"bleaching_percentage", BleachingPercentage(report)},
      {"mortality_rate", MortalityRate(report)}};
}

}  // namespace coralab
