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
#ifndef CORALAB_TESTS_SERVICE_FIXTURE_H_
#define CORALAB_TESTS_SERVICE_FIXTURE_H_

// On-disk scene shared by the service and CLI suites: three 40x30 PNGs, a
// project over them and a COCO ground truth with two rectangles per image.

#include <fstream>
#include <string>
#include <vector>

#include "coralab/coco.h"
#include "coralab/image_io.h"
#include "coralab/project.h"
#include "test_util.h"

namespace coralab::testing {

struct Scene {
  TempDir dir;
  std::filesystem::path project;
  std::filesystem::path gt;

  Scene() {
    std::vector<std::filesystem::path> images;
    Project truth;
    for (int i = 1; i <= 3; ++i) {
      RgbImage img{40, 30, std::vector<uint8_t>(40 * 30 * 3)};
      for (size_t p = 0; p < img.rgb.size(); ++p) img.rgb[p] = static_cast<uint8_t>(p * i);
      const auto path = dir.path() / ("reef" + std::to_string(i) + ".png");
      WriteFileBytes(path, EncodePng(img));
      images.push_back(path);
      truth.images.push_back(ImageEntry{.id = i, .path = path.filename().string(),
                                        .width = 40, .height = 30});
      AddInstance(truth, i, RleEncode(Rect(40, 30, 2, 2, 10, 8)), InstanceSource::kManual);
      AddInstance(truth, i, RleEncode(Rect(40, 30, 20, 10, 12 + i, 12)),
                  InstanceSource::kManual);
    }
    project = dir.path() / "project.json";
    SaveProject(CreateProject(images, {}, dir.path()).project, project);
    gt = dir.path() / "gt.json";
    std::ofstream(gt) << ExportCocoText(truth);
  }

  std::string Descriptor(int erosion = 0) const {
    return "oracle:" + gt.string() + (erosion ? ";erosion=" + std::to_string(erosion) : "");
  }
};

inline std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace coralab::testing

#endif  // CORALAB_TESTS_SERVICE_FIXTURE_H_
