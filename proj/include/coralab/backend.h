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
#ifndef CORALAB_BACKEND_H_
#define CORALAB_BACKEND_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coralab/mask.h"
#include "coralab/project.h"

namespace coralab {

enum class Polarity { kPositive, kNegative };

struct PointPrompt {
  int x = 0;
  int y = 0;
  Polarity polarity = Polarity::kPositive;

  friend bool operator==(const PointPrompt&, const PointPrompt&) = default;
};

struct MaskProposal {
  BinaryMask mask;
  double confidence = 0.0;

  friend bool operator==(const MaskProposal&, const MaskProposal&) = default;
};

// What a backend needs to know about an image. `path` may be empty for
// backends that never look at pixels (the oracle).
struct ImageRef {
  int image_id = 0;
  std::filesystem::path path;
  int width = 0;
  int height = 0;
};

struct PreparationReceipt {
  int image_id = 0;
  bool already_prepared = false;
};

struct AutoSegmentParams {
  double min_area_fraction = 0.0;
  double confidence_threshold = 0.0;
};

// A point-prompt segmentation engine. Implementations must be safe to call
// concurrently for distinct images; callers serialize calls per image.
class SegmentationBackend {
 public:
  virtual ~SegmentationBackend() = default;

  // Per-image feature extraction / caching. Idempotent.
  virtual PreparationReceipt Prepare(const ImageRef& image) = 0;
  virtual bool IsPrepared(int image_id) const = 0;
  // Raw automatic proposals. Filtering and ordering are applied by
  // AutoSegment so every backend honours the same contract.
  virtual std::vector<MaskProposal> Propose(const ImageRef& image,
                                            const AutoSegmentParams& params) = 0;
  // Prompts have already been validated by PromptToMask.
  virtual MaskProposal Prompt(const ImageRef& image,
                              std::span<const PointPrompt> prompts) = 0;
};

// Smallest surviving area: ceil(fraction * width * height). Products within
// 1e-12 (relative) of an integer are treated as that integer so that e.g.
// 0.01 of a 1000x1000 image is exactly 10000.
int64_t MinAreaThreshold(double fraction, int width, int height);

// Proposals with area >= MinAreaThreshold and confidence >= threshold,
// largest first (ties keep backend order).
std::vector<MaskProposal> AutoSegment(SegmentationBackend& backend,
                                      const ImageRef& image,
                                      double min_area_fraction,
                                      double confidence_threshold);

MaskProposal PromptToMask(SegmentationBackend& backend, const ImageRef& image,
                          std::span<const PointPrompt> prompts);

ImageRef ImageRefFor(const Project& project, int image_id,
                     const std::filesystem::path& project_dir);

// Prepares through the backend and marks the image prepared. On failure the
// project is left untouched.
PreparationReceipt PrepareImage(SegmentationBackend& backend, Project& project,
                                int image_id,
                                const std::filesystem::path& project_dir);

struct BackendDescriptor {
  enum class Kind { kOracle, kSubprocess };

  Kind kind = Kind::kOracle;
  std::filesystem::path ground_truth;  // oracle: COCO JSON or PNG directory
  int erosion_radius = 0;              // oracle only
  std::string command;                 // subprocess only, run via /bin/sh -c

  friend bool operator==(const BackendDescriptor&,
                         const BackendDescriptor&) = default;
};

// "oracle:<path>[;erosion=<r>]" or "subprocess:<command line>".
BackendDescriptor ParseBackendDescriptor(std::string_view text);
std::string FormatBackendDescriptor(const BackendDescriptor& descriptor);

// Name of the environment variable holding a default descriptor.
inline constexpr const char* kBackendEnvVar = "CORALAB_BACKEND";

std::unique_ptr<SegmentationBackend> MakeBackend(
    const BackendDescriptor& descriptor);

}  // namespace coralab

#endif  // CORALAB_BACKEND_H_
