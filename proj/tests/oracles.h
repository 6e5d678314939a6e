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
#ifndef CORALAB_TESTS_ORACLES_H_
#define CORALAB_TESTS_ORACLES_H_

// Fixtures and brute-force oracles shared by the unit suites and the
// acceptance binary.

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "coralab/analytics.h"
#include "coralab/image_io.h"
#include "coralab/project.h"
#include "coralab/semantic.h"
#include "test_util.h"

namespace coralab::testing {

// 1000x1000, disjoint label-1 instances: 300 px Healthy, 100 px Bleached.
inline Project HealthyBleachedScene() {
  Project p;
  p.images.push_back(ImageEntry{.id = 1, .path = "a.png", .width = 1000, .height = 1000});
  DefineLabels(p, {{1, "Acropora", "#FF0000"}});
  const int64_t a = AddInstance(p, 1, RleEncode(Rect(1000, 1000, 0, 0, 30, 10)),
                                InstanceSource::kManual);
  const int64_t b = AddInstance(p, 1, RleEncode(Rect(1000, 1000, 100, 100, 10, 10)),
                                InstanceSource::kManual);
  AssignLabel(p, 1, a, 1);
  AssignLabel(p, 1, b, 1);
  AssignHealth(p, 1, a, HealthStatus::kHealthy);
  AssignHealth(p, 1, b, HealthStatus::kBleached);
  return p;
}

// Independent recomputation: decode every mask pixel by pixel, paint in
// creation order and count.
// Pixels where FlattenToSemantic disagrees with the owner map are counted
// into `semantic_mismatches` when given.
inline StatsReport BruteForceStats(const Project& p, std::optional<int> only,
                                   int64_t* semantic_mismatches = nullptr) {
  int64_t total = 0, coral = 0, unassigned_px = 0, unassigned_n = 0;
  std::map<int, std::pair<int64_t, int64_t>> labels;   // pixels, count
  std::map<HealthStatus, std::pair<int64_t, int64_t>> health;
  for (const ImageEntry& image : p.images) {
    if (only && image.id != *only) continue;
    const auto insts = InstancesOf(p, image.id);
    std::vector<const LabeledInstance*> order;
    for (const auto& i : insts) order.push_back(&i);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) {
      return a->creation_index < b->creation_index;
    });
    std::vector<const LabeledInstance*> owner(
        static_cast<size_t>(image.width) * image.height, nullptr);
    for (const LabeledInstance* inst : order) {
      const BinaryRaster r = RleDecode(inst->mask);
      for (int row = 0; row < image.height; ++row)
        for (int col = 0; col < image.width; ++col)
          if (r.at(row, col)) owner[static_cast<size_t>(row) * image.width + col] = inst;
      if (inst->label_id) {
        ++labels[*inst->label_id].second;
      } else {
        ++unassigned_n;
      }
      ++health[inst->health].second;
    }
    total += static_cast<int64_t>(owner.size());
    for (const LabeledInstance* o : owner) {
      if (!o) continue;
      ++coral;
      if (o->label_id) {
        ++labels[*o->label_id].first;
      } else {
        ++unassigned_px;
      }
      ++health[o->health].first;
    }

    // The semantic raster must agree with the owner map.
    const SemanticRaster sem = FlattenToSemantic(insts, image.width, image.height);
    for (size_t px = 0; px < owner.size(); ++px) {
      const uint16_t want = !owner[px] ? SemanticRaster::kBackground
                            : owner[px]->label_id
                                ? static_cast<uint16_t>(*owner[px]->label_id)
                                : SemanticRaster::kUnassigned;
      if (semantic_mismatches && sem.pixels[px] != want) ++*semantic_mismatches;
    }
  }
  StatsReport r;
  r.image_id = only;
  r.total_pixels = total;
  r.coral_pixels = coral;
  r.coverage = static_cast<double>(coral) / static_cast<double>(total);
  auto ratio = [](int64_t a, int64_t b) {
    return b ? static_cast<double>(a) / static_cast<double>(b) : 0.0;
  };
  for (auto [id, pc] : labels) {
    r.per_label[id] = {pc.first, ratio(pc.first, total), ratio(pc.first, coral),
                       pc.second};
  }
  for (auto [h, pc] : health) r.health[h] = {pc.first, ratio(pc.first, coral), pc.second};
  r.unassigned_pixels = unassigned_px;
  r.unassigned_instances = unassigned_n;
  return r;
}

// Two images; on image 1 instance 2 overlaps instance 1 at (x1,y1) and
// instance 3 is unlabelled.
inline Project InterchangeFixture() {
  Project p;
  p.images = {ImageEntry{.id = 1, .path = "reef/a.png", .width = 4, .height = 3},
              ImageEntry{.id = 2, .path = "reef/b.png", .width = 2, .height = 2}};
  DefineLabels(p, {{1, "Acropora", "#FF0000"}, {2, "Soft, branching", "#00FF00"}});
  AddInstance(p, 1, RleEncode(Rect(4, 3, 0, 0, 2, 2)), InstanceSource::kManual);
  AddInstance(p, 1, RleEncode(Rect(4, 3, 1, 1, 3, 2)), InstanceSource::kManual);
  AddInstance(p, 1, RleEncode(Rect(4, 3, 3, 0, 1, 1)), InstanceSource::kAuto, 0.75);
  AddInstance(p, 2, BinaryMask::Full(2, 2), InstanceSource::kManual);
  AssignLabel(p, 1, 1, 1);
  AssignLabel(p, 1, 2, 2);
  AssignLabel(p, 2, 1, 1);
  AssignHealth(p, 1, 1, HealthStatus::kHealthy);
  AssignHealth(p, 1, 2, HealthStatus::kBleached);
  AssignHealth(p, 1, 3, HealthStatus::kDead);
  return p;
}

inline RgbImage Gradient(int w, int h) {
  RgbImage img{w, h, std::vector<uint8_t>(static_cast<size_t>(3) * w * h)};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      uint8_t* px = &img.rgb[3 * (static_cast<size_t>(y) * w + x)];
      px[0] = static_cast<uint8_t>(40 * x + 1);
      px[1] = static_cast<uint8_t>(60 * y + 3);
      px[2] = 200;
    }
  return img;
}

}  // namespace coralab::testing

#endif  // CORALAB_TESTS_ORACLES_H_
