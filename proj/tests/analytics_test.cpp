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

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "coralab/error.h"
#include "coralab/semantic.h"
#include "oracles.h"
#include "project_gen.h"
#include "test_util.h"

namespace coralab {
namespace {

using ::coralab::testing::BruteForceStats;
using ::coralab::testing::HealthyBleachedScene;
using ::coralab::testing::RandomProject;
using ::coralab::testing::Rect;

Project OneImage(int w, int h) {
  Project p;
  p.images.push_back(ImageEntry{.id = 1, .path = "a.png", .width = w, .height = h});
  return p;
}

TEST(ImageStatsTest, EmptyImage) {
  const Project p = OneImage(4, 4);
  const StatsReport r = ImageStats(p, 1);
  EXPECT_EQ(r.total_pixels, 16);
  EXPECT_EQ(r.coral_pixels, 0);
  EXPECT_EQ(r.coverage, 0.0);
  EXPECT_TRUE(r.per_label.empty());
  EXPECT_TRUE(r.health.empty());
  EXPECT_EQ(BleachingPercentage(r), 0.0);
  EXPECT_EQ(MortalityRate(r), 0.0);
}

TEST(ImageStatsTest, FullImageHealthyInstance) {
  Project p = OneImage(5, 3);
  DefineLabels(p, {{1, "Acropora", "#FF0000"}});
  const int64_t id = AddInstance(p, 1, BinaryMask::Full(5, 3), InstanceSource::kManual);
  AssignLabel(p, 1, id, 1);
  AssignHealth(p, 1, id, HealthStatus::kHealthy);
  const StatsReport r = ImageStats(p, 1);
  EXPECT_EQ(r.coverage, 1.0);
  EXPECT_EQ(r.per_label.at(1).fraction_of_coral, 1.0);
  EXPECT_EQ(r.health.at(HealthStatus::kHealthy).fraction_of_coral, 1.0);
  EXPECT_EQ(BleachingPercentage(r), 0.0);
  EXPECT_EQ(MortalityRate(r), 0.0);
}

TEST(ImageStatsTest, HealthyBleachedScene) {
  const StatsReport r = ImageStats(HealthyBleachedScene(), 1);
  EXPECT_EQ(r.coral_pixels, 400);
  EXPECT_EQ(r.coverage, 0.0004);
  EXPECT_EQ(r.health.at(HealthStatus::kBleached).fraction_of_coral, 0.25);
  EXPECT_EQ(r.health.at(HealthStatus::kHealthy).pixels, 300);
  EXPECT_EQ(BleachingPercentage(r), 0.25);
  EXPECT_EQ(MortalityRate(r), 0.0);
  EXPECT_EQ(r.per_label.at(1).instance_count, 2);
}

TEST(ImageStatsTest, UnknownImage) {
  EXPECT_THROW(ImageStats(OneImage(2, 2), 5), Error);
}

TEST(ImageStatsTest, OverlapFollowsCreationOrder) {
  Project p = OneImage(2, 2);
  DefineLabels(p, {{1, "A", "#FF0000"}, {2, "B", "#00FF00"}});
  const int64_t a = AddInstance(p, 1, RleEncode(Rect(2, 2, 0, 0, 1, 2)),
                                InstanceSource::kManual);
  const int64_t b = AddInstance(p, 1, RleEncode(Rect(2, 2, 0, 0, 2, 1)),
                                InstanceSource::kManual);
  AssignLabel(p, 1, a, 1);
  AssignLabel(p, 1, b, 2);
  AssignHealth(p, 1, a, HealthStatus::kDead);
  const StatsReport r = ImageStats(p, 1);
  EXPECT_EQ(r.coral_pixels, 3);
  EXPECT_EQ(r.per_label.at(1).pixels, 1);
  EXPECT_EQ(r.per_label.at(2).pixels, 2);
  EXPECT_EQ(r.health.at(HealthStatus::kDead).pixels, 1);
  EXPECT_EQ(r.health.at(HealthStatus::kUnspecified).pixels, 2);
  EXPECT_DOUBLE_EQ(MortalityRate(r), 1.0 / 3.0);
}

TEST(ProjectStatsTest, Examples) {
  EXPECT_EQ(ProjectStats(HealthyBleachedScene()).coverage,
            ImageStats(HealthyBleachedScene(), 1).coverage);

  Project equal;
  equal.images = {ImageEntry{.id = 1, .path = "a.png", .width = 10, .height = 10},
                  ImageEntry{.id = 2, .path = "b.png", .width = 10, .height = 10}};
  AddInstance(equal, 1, RleEncode(Rect(10, 10, 0, 0, 10, 2)), InstanceSource::kManual);
  AddInstance(equal, 2, RleEncode(Rect(10, 10, 0, 0, 10, 4)), InstanceSource::kManual);
  EXPECT_DOUBLE_EQ(ProjectStats(equal).coverage, 0.3);

  Project weighted;
  weighted.images = {ImageEntry{.id = 1, .path = "a.png", .width = 10, .height = 10},
                     ImageEntry{.id = 2, .path = "b.png", .width = 20, .height = 15}};
  AddInstance(weighted, 1, BinaryMask::Full(10, 10), InstanceSource::kManual);
  EXPECT_EQ(ProjectStats(weighted).coverage, 0.25);

  EXPECT_THROW(ProjectStats(Project{}), Error);
}

TEST(ProjectStatsTest, SingleImageEqualsImageReport) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Project p = RandomProject(rng, 1);
    StatsReport project = ProjectStats(p);
    EXPECT_FALSE(project.image_id.has_value());
    project.image_id = p.images[0].id;
    EXPECT_EQ(project, ImageStats(p, p.images[0].id));
  }
}

TEST(ProjectStatsTest, MatchesBruteForceOnRandomProjects) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const Project p = RandomProject(rng);
    int64_t mismatches = 0;
    EXPECT_EQ(ProjectStats(p), BruteForceStats(p, std::nullopt, &mismatches)) << trial;
    EXPECT_EQ(mismatches, 0);
    for (const ImageEntry& image : p.images) {
      EXPECT_EQ(ImageStats(p, image.id), BruteForceStats(p, image.id));
    }
  }
}

TEST(StatsPropertyTest, RatiosAndSums) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Project p = RandomProject(rng);
    const StatsReport r = ProjectStats(p);
    EXPECT_GE(r.coverage, 0.0);
    EXPECT_LE(r.coverage, 1.0);
    int64_t label_px = r.unassigned_pixels;
    double label_frac = 0, health_frac = 0;
    int64_t health_px = 0;
    for (const auto& [id, s] : r.per_label) {
      label_px += s.pixels;
      label_frac += s.fraction_of_coral;
    }
    for (const auto& [h, s] : r.health) {
      health_px += s.pixels;
      health_frac += s.fraction_of_coral;
    }
    EXPECT_EQ(label_px, r.coral_pixels);
    EXPECT_EQ(health_px, r.coral_pixels);
    if (r.coral_pixels > 0) {
      EXPECT_NEAR(health_frac, 1.0, 1e-12);
      EXPECT_NEAR(label_frac + static_cast<double>(r.unassigned_pixels) /
                                   static_cast<double>(r.coral_pixels),
                  1.0, 1e-12);
    }
  }
}

TEST(StatsPropertyTest, MonotoneUnderAddAndRemove) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    Project p = RandomProject(rng, 1);
    const ImageEntry image = p.images[0];
    const int64_t before = ImageStats(p, image.id).coral_pixels;
    const int64_t id = AddInstance(
        p, image.id, testing::RandomBlobMask(rng, image.width, image.height),
        InstanceSource::kManual);
    const int64_t after = ImageStats(p, image.id).coral_pixels;
    EXPECT_GE(after, before);
    RemoveInstance(p, image.id, id);
    EXPECT_EQ(ImageStats(p, image.id).coral_pixels, before);
    for (const LabeledInstance& inst : std::vector(InstancesOf(p, image.id).begin(),
                                                   InstancesOf(p, image.id).end())) {
      const int64_t with = ImageStats(p, image.id).coral_pixels;
      RemoveInstance(p, image.id, inst.instance_id);
      EXPECT_LE(ImageStats(p, image.id).coral_pixels, with);
    }
  }
}

TEST(StatsPropertyTest, PermutingDisjointInstances) {
  // Disjoint column bands in shuffled creation order.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> cols(8);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(cols.begin(), cols.end(), rng);
    Project p = OneImage(8, 5);
    DefineLabels(p, {{1, "A", "#FF0000"}, {2, "B", "#00FF00"}});
    for (int c : cols) {
      const int64_t id = AddInstance(p, 1, RleEncode(Rect(8, 5, c, c % 3, 1, 2)),
                                     InstanceSource::kManual);
      AssignLabel(p, 1, id, 1 + c % 2);
      AssignHealth(p, 1, id, kAllHealthStatuses[c % 4]);
    }
    const StatsReport r = ImageStats(p, 1);
    EXPECT_EQ(r.coral_pixels, 16);
    EXPECT_EQ(r.per_label.at(1).pixels, 8);
    EXPECT_EQ(r.health.at(HealthStatus::kHealthy).pixels, 4);
  }
}

TEST(StatsJsonTest, Shape) {
  const Project p = HealthyBleachedScene();
  const auto j = StatsToJson(ImageStats(p, 1), p);
  EXPECT_EQ(j.at("scope"), "image");
  EXPECT_EQ(j.at("image_id"), 1);
  EXPECT_EQ(j.at("coral_pixels"), 400);
  EXPECT_EQ(j.at("bleaching_percentage"), 0.25);
  EXPECT_EQ(j.at("mortality_rate"), 0.0);
}

}  // namespace
}  // namespace coralab
