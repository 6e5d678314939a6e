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
#include "coralab/project.h"

#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "coralab/error.h"
#include "coralab/fault.h"
#include "coralab/image_io.h"
#include "test_util.h"

namespace coralab {
namespace {

namespace fs = std::filesystem;
using ::coralab::testing::TempDir;

fs::path WritePng(const fs::path& dir, const std::string& name, int w, int h) {
  RgbImage image{w, h, std::vector<uint8_t>(static_cast<size_t>(w) * h * 3, 40)};
  const fs::path path = dir / name;
  WriteFileBytes(path, EncodePng(image));
  return path;
}

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

Project TwoImageProject(const TempDir& dir) {
  std::vector<fs::path> paths{WritePng(dir.path(), "a.png", 4, 3),
                              WritePng(dir.path(), "b.png", 5, 5)};
  return CreateProject(paths, {}, dir.path()).project;
}

TEST(CreateProjectTest, SequentialIdsAndRelativePaths) {
  TempDir dir;
  std::vector<fs::path> paths;
  for (int i = 0; i < 3; ++i) {
    paths.push_back(WritePng(dir.path(), "img" + std::to_string(i) + ".png",
                             8 + i, 6));
  }
  const ImportResult result = CreateProject(paths, {}, dir.path());
  EXPECT_TRUE(result.errors.empty());
  ASSERT_EQ(result.project.images.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    const ImageEntry& image = result.project.images[i];
    EXPECT_EQ(image.id, i + 1);
    EXPECT_EQ(image.path, "img" + std::to_string(i) + ".png");
    EXPECT_EQ(image.width, 8 + i);
    EXPECT_EQ(image.height, 6);
    EXPECT_FALSE(image.prepared);
  }
  EXPECT_TRUE(result.project.labels.empty());
  EXPECT_TRUE(result.project.instances.empty());
}

TEST(CreateProjectTest, CorruptFileIsSkippedAndReported) {
  TempDir dir;
  std::vector<fs::path> paths{WritePng(dir.path(), "a.png", 4, 4),
                              dir.path() / "broken.png",
                              WritePng(dir.path(), "c.png", 4, 4)};
  std::ofstream(paths[1]) << "not a png";
  const ImportResult result = CreateProject(paths, {}, dir.path());
  ASSERT_EQ(result.project.images.size(), 2u);
  EXPECT_EQ(result.project.images[1].id, 2);
  EXPECT_EQ(result.project.images[1].path, "c.png");
  ASSERT_EQ(result.errors.size(), 1u);
  EXPECT_EQ(result.errors[0].path, paths[1].string());
}

TEST(CreateProjectTest, FatalWhenNothingImports) {
  TempDir dir;
  std::vector<fs::path> none;
  EXPECT_EQ(CodeOf([&] { CreateProject(none, {}, dir.path()); }),
            ErrorCode::kImport);
  std::vector<fs::path> unsupported{dir.path() / "x.bmp"};
  std::ofstream(unsupported[0]) << "BM";
  EXPECT_EQ(CodeOf([&] { CreateProject(unsupported, {}, dir.path()); }),
            ErrorCode::kImport);
}

TEST(CreateProjectTest, JpegAndWebpAreSupported) {
  EXPECT_TRUE(IsSupportedImagePath("a.JPG"));
  EXPECT_TRUE(IsSupportedImagePath("a.jpeg"));
  EXPECT_TRUE(IsSupportedImagePath("a.webp"));
  EXPECT_FALSE(IsSupportedImagePath("a.tif"));
}

TEST(SampleImagesTest, Examples) {
  std::vector<fs::path> ten;
  for (int i = 9; i >= 0; --i) ten.push_back("p" + std::to_string(i) + ".png");
  EXPECT_EQ(SampleImages(ten, 1).size(), 10u);
  const auto every_third = SampleImages(ten, 3);
  ASSERT_EQ(every_third.size(), 4u);
  EXPECT_EQ(every_third[0], "p0.png");
  EXPECT_EQ(every_third[1], "p3.png");
  EXPECT_EQ(every_third[2], "p6.png");
  EXPECT_EQ(every_third[3], "p9.png");
  EXPECT_EQ(SampleImages({"only.png"}, 5),
            (std::vector<fs::path>{"only.png"}));
  EXPECT_EQ(CodeOf([&] { SampleImages(ten, 0); }), ErrorCode::kValidation);
}

TEST(DefineLabelsTest, Examples) {
  TempDir dir;
  Project p = TwoImageProject(dir);
  DefineLabels(p, {{1, "Acropora", "#FF0000"}, {2, "Porites", "#00FF00"}});
  EXPECT_EQ(p.labels.size(), 2u);

  const int64_t id = AddInstance(p, 1, BinaryMask::Full(4, 3),
                                 InstanceSource::kManual);
  AssignLabel(p, 1, id, 2);
  DefineLabels(p, {{1, "Acropora", "#FF0000"}});
  EXPECT_FALSE(FindInstance(p, 1, id).label_id.has_value());
  EXPECT_TRUE(CheckProject(p).empty());

  EXPECT_EQ(CodeOf([&] {
              DefineLabels(p, {{1, "A", "#FF0000"}, {1, "B", "#00FF00"}});
            }),
            ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([&] {
              DefineLabels(p, {{1, "A", "#FF0000"}, {2, "A", "#00FF00"}});
            }),
            ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([&] { DefineLabels(p, {{1, "A", "red"}}); }),
            ErrorCode::kValidation);
  EXPECT_EQ(p.labels.size(), 1u);
}

TEST(InstanceEditTest, AddAssignRemove) {
  TempDir dir;
  Project p = TwoImageProject(dir);
  DefineLabels(p, {{1, "Acropora", "#FF0000"}});
  BinaryRaster r(4, 3);
  r.set(1, 1, true);
  const int64_t first = AddInstance(p, 1, RleEncode(r), InstanceSource::kManual);
  EXPECT_EQ(first, 1);
  EXPECT_EQ(FindInstance(p, 1, first).creation_index, 1);
  EXPECT_EQ(FindInstance(p, 1, first).health, HealthStatus::kUnspecified);
  EXPECT_EQ(FindInstance(p, 1, first).confidence, 1.0);
  const int64_t second =
      AddInstance(p, 1, BinaryMask::Full(4, 3), InstanceSource::kAuto, 0.75);
  EXPECT_EQ(FindInstance(p, 1, second).creation_index, 2);
  EXPECT_EQ(FindInstance(p, 1, second).confidence, 0.75);

  AssignLabel(p, 1, first, 1);
  AssignHealth(p, 1, first, HealthStatus::kBleached);
  EXPECT_EQ(FindInstance(p, 1, first).label_id, 1);
  EXPECT_EQ(FindInstance(p, 1, first).health, HealthStatus::kBleached);
  const Project before = p;
  AssignLabel(p, 1, first, 1);
  EXPECT_EQ(p, before);

  EXPECT_EQ(CodeOf([&] { AssignLabel(p, 1, 42, 1); }), ErrorCode::kNotFound);
  EXPECT_EQ(CodeOf([&] { AssignLabel(p, 1, first, 9); }), ErrorCode::kNotFound);
  EXPECT_EQ(CodeOf([&] {
              AddInstance(p, 1, BinaryMask::Empty(4, 3),
                          InstanceSource::kManual);
            }),
            ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([&] {
              AddInstance(p, 1, BinaryMask::Full(3, 3), InstanceSource::kManual);
            }),
            ErrorCode::kDimension);
  EXPECT_EQ(CodeOf([&] {
              AddInstance(p, 7, BinaryMask::Full(4, 3), InstanceSource::kManual);
            }),
            ErrorCode::kNotFound);

  RemoveInstance(p, 1, first);
  EXPECT_EQ(InstancesOf(p, 1).size(), 1u);
  EXPECT_EQ(FindInstance(p, 1, second).creation_index, 2);
  EXPECT_EQ(CodeOf([&] { FindInstance(p, 1, first); }), ErrorCode::kNotFound);
  EXPECT_EQ(CodeOf([&] { RemoveInstance(p, 1, 99); }), ErrorCode::kNotFound);

  // Removing the newest instance never lets its index be reused.
  RemoveInstance(p, 1, second);
  EXPECT_EQ(AddInstance(p, 1, BinaryMask::Full(4, 3), InstanceSource::kManual),
            3);
}

Project ThreeInstanceProject(const TempDir& dir) {
  Project p = TwoImageProject(dir);
  p.images[0].site = "Tung Ping Chau";
  DefineLabels(p, {{1, "Acropora", "#FF0000"}, {2, "Porites, massive", "#00ff00"}});
  const int64_t a = AddInstance(p, 1, BinaryMask(4, 3, {2, 5, 5}),
                                InstanceSource::kManual);
  AddInstance(p, 1, BinaryMask::Full(4, 3), InstanceSource::kAuto, 0.3);
  const int64_t c = AddInstance(p, 2, BinaryMask(5, 5, {0, 1, 24}),
                                InstanceSource::kManual);
  AssignLabel(p, 1, a, 1);
  AssignHealth(p, 1, a, HealthStatus::kDead);
  AssignLabel(p, 2, c, 2);
  MarkPrepared(p, 2);
  return p;
}

TEST(PersistenceTest, RoundTrip) {
  TempDir dir;
  const Project p = ThreeInstanceProject(dir);
  const fs::path file = dir.path() / "project.json";
  SaveProject(p, file);
  EXPECT_EQ(LoadProject(file), p);
}

TEST(PersistenceTest, UnsupportedVersion) {
  TempDir dir;
  nlohmann::json doc = ProjectToJson(ThreeInstanceProject(dir));
  doc["schema_version"] = 2;
  const fs::path file = dir.path() / "v2.json";
  std::ofstream(file) << doc.dump();
  EXPECT_EQ(CodeOf([&] { LoadProject(file); }), ErrorCode::kUnsupportedVersion);
}

TEST(PersistenceTest, DanglingLabelIsCorrupt) {
  TempDir dir;
  nlohmann::json doc = ProjectToJson(ThreeInstanceProject(dir));
  doc["instances"]["1"][0]["label_id"] = 7;
  const fs::path file = dir.path() / "bad.json";
  std::ofstream(file) << doc.dump();
  EXPECT_EQ(CodeOf([&] { LoadProject(file); }), ErrorCode::kCorruptProject);
}

TEST(PersistenceTest, MalformedDocumentsAreCorrupt) {
  TempDir dir;
  const fs::path file = dir.path() / "bad.json";
  for (const char* text :
       {"{not json", R"({"schema_version":1})", "[]",
        R"({"schema_version":1,"config":{"min_area_fraction":0,"confidence_threshold":0},"images":[],"labels":[],"instances":{"x":[]}})"}) {
    std::ofstream(file, std::ios::trunc) << text;
    EXPECT_EQ(CodeOf([&] { LoadProject(file); }), ErrorCode::kCorruptProject)
        << text;
  }
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

TEST(PersistenceTest, FailedSaveLeavesPreviousFileIntact) {
  TempDir dir;
  Project p = ThreeInstanceProject(dir);
  const fs::path file = dir.path() / "project.json";
  SaveProject(p, file);
  const std::string before = Slurp(file);
  RemoveInstance(p, 1, 1);
  for (const std::string& point : FaultInjector::KnownPoints()) {
    if (point.rfind("save.", 0) != 0) continue;
    ScopedFault fault(point);
    EXPECT_EQ(CodeOf([&] { SaveProject(p, file); }), ErrorCode::kInjectedFault)
        << point;
    EXPECT_EQ(Slurp(file), before) << point;
  }
  // No temporary files left behind.
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path())) ++files;
  EXPECT_EQ(files, 3);  // a.png, b.png, project.json
}

TEST(ProjectPropertyTest, RandomEditSequencesKeepIntegrity) {
  TempDir dir;
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    Project p = TwoImageProject(dir);
    std::map<int, int64_t> last_index;
    for (int step = 0; step < 60; ++step) {
      const int image_id = 1 + static_cast<int>(rng() % 2);
      const ImageEntry& image = FindImage(p, image_id);
      const auto existing = InstancesOf(p, image_id);
      switch (rng() % 6) {
        case 0:
        case 1: {
          BinaryRaster r = testing::RandomRasterOfSize(rng, image.width,
                                                       image.height, 0.4);
          r.set(0, 0, true);
          const int64_t id = AddInstance(p, image_id, RleEncode(r),
                                         InstanceSource::kManual);
          EXPECT_GT(FindInstance(p, image_id, id).creation_index,
                    last_index[image_id]);
          last_index[image_id] = FindInstance(p, image_id, id).creation_index;
          break;
        }
        case 2:
          if (!existing.empty()) {
            RemoveInstance(p, image_id,
                           existing[rng() % existing.size()].instance_id);
          }
          break;
        case 3:
          if (!existing.empty() && !p.labels.empty()) {
            AssignLabel(p, image_id,
                        existing[rng() % existing.size()].instance_id,
                        p.labels[rng() % p.labels.size()].id);
          }
          break;
        case 4:
          if (!existing.empty()) {
            AssignHealth(p, image_id,
                         existing[rng() % existing.size()].instance_id,
                         kAllHealthStatuses[rng() % 4]);
          }
          break;
        case 5: {
          std::vector<Label> labels;
          for (int id = 1; id <= 4; ++id) {
            if (rng() % 2) {
              labels.push_back({id, "L" + std::to_string(id), "#123456"});
            }
          }
          DefineLabels(p, labels);
          break;
        }
      }
      ASSERT_TRUE(CheckProject(p).empty());
    }
    EXPECT_EQ(ProjectFromJson(ProjectToJson(p)), p);
  }
}

}  // namespace
}  // namespace coralab
