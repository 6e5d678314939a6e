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
#ifndef CORALAB_TESTS_PROJECT_GEN_H_
#define CORALAB_TESTS_PROJECT_GEN_H_

// Random valid projects built only through the public edit operations.

#include <random>
#include <string>
#include <vector>

#include "coralab/project.h"
#include "test_util.h"

namespace coralab::testing {

inline BinaryMask RandomBlobMask(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> cx(0, w - 1), cy(0, h - 1);
  std::uniform_int_distribution<int> radius(1, std::max(1, std::min(w, h) / 3));
  std::bernoulli_distribution rect(0.3);
  BinaryRaster r = rect(rng)
                       ? [&] {
                           const int x = cx(rng), y = cy(rng);
                           std::uniform_int_distribution<int> rw(1, w - x);
                           std::uniform_int_distribution<int> rh(1, h - y);
                           return Rect(w, h, x, y, rw(rng), rh(rng));
                         }()
                       : Disc(w, h, cx(rng), cy(rng), radius(rng));
  return RleEncode(r);
}

// 1..max_images images, up to four labels (one with a comma in its name),
// overlapping instances, some unlabelled, some removed.
inline Project RandomProject(std::mt19937_64& rng, int max_images = 3,
                             int max_side = 24) {
  std::uniform_int_distribution<int> n_images(1, max_images);
  std::uniform_int_distribution<int> side(1, max_side);
  std::uniform_int_distribution<int> n_instances(0, 6);
  std::uniform_int_distribution<int> health(0, 3);
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> conf(0.0, 1.0);

  Project p;
  const int images = n_images(rng);
  for (int i = 1; i <= images; ++i) {
    p.images.push_back(ImageEntry{.id = i,
                                  .path = "img/" + std::to_string(i) + ".png",
                                  .width = side(rng),
                                  .height = side(rng),
                                  .prepared = coin(rng)});
  }
  const std::vector<Label> all{{1, "Acropora", "#FF0000"},
                               {2, "Porites", "#00FF00"},
                               {4, "Soft, branching", "#0000FF"},
                               {7, "Pocillopora", "#FFAA00"}};
  std::vector<Label> labels;
  for (const Label& l : all) {
    if (coin(rng)) labels.push_back(l);
  }
  DefineLabels(p, labels);
  for (const ImageEntry& image : std::vector<ImageEntry>(p.images)) {
    const int n = n_instances(rng);
    std::vector<int64_t> ids;
    for (int k = 0; k < n; ++k) {
      const bool manual = coin(rng);
      ids.push_back(AddInstance(p, image.id,
                                RandomBlobMask(rng, image.width, image.height),
                                manual ? InstanceSource::kManual
                                       : InstanceSource::kAuto,
                                conf(rng)));
    }
    for (int64_t id : ids) {
      if (!labels.empty() && coin(rng)) {
        std::uniform_int_distribution<size_t> pick(0, labels.size() - 1);
        AssignLabel(p, image.id, id, labels[pick(rng)].id);
      }
      AssignHealth(p, image.id, id, kAllHealthStatuses[health(rng)]);
    }
    if (!ids.empty() && coin(rng)) RemoveInstance(p, image.id, ids.front());
  }
  return p;
}

}  // namespace coralab::testing

#endif  // CORALAB_TESTS_PROJECT_GEN_H_
