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
#include "coralab/backend.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "coralab/error.h"

namespace coralab {
namespace {

void CheckProposal(const MaskProposal& p, const ImageRef& image) {
  if (p.mask.width() != image.width || p.mask.height() != image.height) {
    throw Error(ErrorCode::kBackendFailure,
                "backend returned a mask of the wrong size for image " +
                    std::to_string(image.image_id));
  }
  if (!(p.confidence >= 0.0 && p.confidence <= 1.0)) {
    throw Error(ErrorCode::kBackendFailure,
                "backend returned confidence outside [0,1]");
  }
}

}  // namespace

int64_t MinAreaThreshold(double fraction, int width, int height) {
  const double product = fraction * static_cast<double>(int64_t{width} * height);
  const double nearest = std::round(product);
  if (std::abs(product - nearest) <= 1e-12 * std::max(1.0, std::abs(product))) {
    return static_cast<int64_t>(nearest);
  }
  return static_cast<int64_t>(std::ceil(product));
}

std::vector<MaskProposal> AutoSegment(SegmentationBackend& backend,
                                      const ImageRef& image,
                                      double min_area_fraction,
                                      double confidence_threshold) {
  if (!(min_area_fraction >= 0.0 && min_area_fraction < 1.0)) {
    throw Error(ErrorCode::kValidation, "min_area_fraction must be in [0,1)");
  }
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) {
    throw Error(ErrorCode::kValidation,
                "confidence_threshold must be in [0,1]");
  }
  if (!backend.IsPrepared(image.image_id)) {
    throw Error(ErrorCode::kUnprepared,
                "image " + std::to_string(image.image_id) + " is not prepared");
  }
  const int64_t min_area =
      MinAreaThreshold(min_area_fraction, image.width, image.height);
  std::vector<std::pair<int64_t, MaskProposal>> kept;
  for (MaskProposal& p :
       backend.Propose(image, {min_area_fraction, confidence_threshold})) {
    CheckProposal(p, image);
    const int64_t area = MaskArea(p.mask);
    if (area < 1 || area < min_area || p.confidence < confidence_threshold) {
      continue;
    }
    kept.emplace_back(area, std::move(p));
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  std::vector<MaskProposal> out;
  out.reserve(kept.size());
  for (auto& [area, p] : kept) out.push_back(std::move(p));
  return out;
}

MaskProposal PromptToMask(SegmentationBackend& backend, const ImageRef& image,
                          std::span<const PointPrompt> prompts) {
  if (prompts.empty()) {
    throw Error(ErrorCode::kValidation, "at least one prompt is required");
  }
  bool any_positive = false;
  for (const PointPrompt& p : prompts) {
    if (p.x < 0 || p.y < 0 || p.x >= image.width || p.y >= image.height) {
      throw Error(ErrorCode::kValidation,
                  "prompt (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                      ") is outside the image");
    }
    any_positive = any_positive || p.polarity == Polarity::kPositive;
  }
  if (!any_positive) {
    throw Error(ErrorCode::kValidation, "at least one positive prompt is required");
  }
  if (!backend.IsPrepared(image.image_id)) {
    throw Error(ErrorCode::kUnprepared,
                "image " + std::to_string(image.image_id) + " is not prepared");
  }
  MaskProposal p = backend.Prompt(image, prompts);
  CheckProposal(p, image);
  return p;
}

ImageRef ImageRefFor(const Project& project, int image_id,
                     const std::filesystem::path& project_dir) {
  const ImageEntry& entry = FindImage(project, image_id);
  return ImageRef{entry.id, project_dir / entry.path, entry.width,
                  entry.height};
}

PreparationReceipt PrepareImage(SegmentationBackend& backend, Project& project,
                                int image_id,
                                const std::filesystem::path& project_dir) {
  const ImageRef ref = ImageRefFor(project, image_id, project_dir);
  const PreparationReceipt receipt = backend.Prepare(ref);
  MarkPrepared(project, image_id);
  return receipt;
}

BackendDescriptor ParseBackendDescriptor(std::string_view text) {
  BackendDescriptor d;
  auto bad = [&](const std::string& why) {
    return Error(ErrorCode::kValidation,
                 "bad backend descriptor \"" + std::string(text) + "\": " + why);
  };
  if (text.rfind("oracle:", 0) == 0) {
    d.kind = BackendDescriptor::Kind::kOracle;
    std::string_view rest = text.substr(7);
    const size_t semi = rest.rfind(";erosion=");
    if (semi != std::string_view::npos) {
      const std::string_view value = rest.substr(semi + 9);
      int radius = -1;
      const auto [ptr, ec] =
          std::from_chars(value.data(), value.data() + value.size(), radius);
      if (ec != std::errc() || ptr != value.data() + value.size() || radius < 0) {
        throw bad("erosion must be a non-negative integer");
      }
      d.erosion_radius = radius;
      rest = rest.substr(0, semi);
    }
    if (rest.empty()) throw bad("missing ground-truth path");
    d.ground_truth = std::string(rest);
    return d;
  }
  if (text.rfind("subprocess:", 0) == 0) {
    d.kind = BackendDescriptor::Kind::kSubprocess;
    d.command = std::string(text.substr(11));
    if (d.command.empty()) throw bad("missing command");
    return d;
  }
  throw bad("expected oracle:<path> or subprocess:<command>");
}

std::string FormatBackendDescriptor(const BackendDescriptor& d) {
  if (d.kind == BackendDescriptor::Kind::kSubprocess) {
    return "subprocess:" + d.command;
  }
  std::string out = "oracle:" + d.ground_truth.string();
  if (d.erosion_radius > 0) out += ";erosion=" + std::to_string(d.erosion_radius);
  return out;
}

}  // namespace coralab
