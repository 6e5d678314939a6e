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
#ifndef CORALAB_ORACLE_BACKEND_H_
#define CORALAB_ORACLE_BACKEND_H_

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "coralab/backend.h"
#include "coralab/ground_truth.h"
#include "coralab/image_io.h"

namespace coralab {

// Answers prompts from ground-truth instances, optionally eroded to model an
// imperfect segmenter. Negative prompts are ignored: a prompt call returns
// the instance under the first positive point (the topmost one when
// instances overlap), or an empty mask with confidence 0 on background.
class OracleBackend : public SegmentationBackend {
 public:
  OracleBackend(std::vector<GroundTruth> images, int erosion_radius);
  // Ground truth from per-image instance-id PNGs (<dir>/<image stem>.png,
  // nonzero values are instance ids), loaded on Prepare.
  static std::unique_ptr<OracleBackend> FromPngDirectory(
      std::filesystem::path dir, int erosion_radius);

  int erosion_radius() const { return erosion_radius_; }

  PreparationReceipt Prepare(const ImageRef& image) override;
  bool IsPrepared(int image_id) const override;
  std::vector<MaskProposal> Propose(const ImageRef& image,
                                    const AutoSegmentParams& params) override;
  MaskProposal Prompt(const ImageRef& image,
                      std::span<const PointPrompt> prompts) override;

 private:
  OracleBackend(std::filesystem::path png_dir, int erosion_radius);

  struct Prepared {
    std::vector<BinaryMask> exact;
    std::vector<BinaryMask> eroded;
  };

  GroundTruth LookUp(const ImageRef& image) const;
  const Prepared& PreparedFor(int image_id) const;

  std::vector<GroundTruth> images_;
  std::optional<std::filesystem::path> png_dir_;
  int erosion_radius_;
  mutable std::mutex mutex_;
  std::map<int, Prepared> prepared_;
};

// Splits an instance-id image into one mask per distinct nonzero value,
// ordered by value.
std::vector<BinaryMask> InstancesFromIdImage(const GrayImage& ids);

}  // namespace coralab

#endif  // CORALAB_ORACLE_BACKEND_H_
