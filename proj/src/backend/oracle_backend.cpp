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
#include "coralab/oracle_backend.h"

#include <string>

#include "coralab/error.h"

namespace coralab {

OracleBackend::OracleBackend(std::vector<GroundTruth> images,
                             int erosion_radius)
    : images_(std::move(images)), erosion_radius_(erosion_radius) {
  if (erosion_radius < 0) {
    throw Error(ErrorCode::kValidation, "erosion radius must be >= 0");
  }
  for (const GroundTruth& gt : images_) gt.Validate();
}

OracleBackend::OracleBackend(std::filesystem::path png_dir, int erosion_radius)
    : png_dir_(std::move(png_dir)), erosion_radius_(erosion_radius) {
  if (erosion_radius < 0) {
    throw Error(ErrorCode::kValidation, "erosion radius must be >= 0");
  }
}

std::unique_ptr<OracleBackend> OracleBackend::FromPngDirectory(
    std::filesystem::path dir, int erosion_radius) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kBackendUnavailable,
                "ground-truth directory not found: " + dir.string());
  }
  return std::unique_ptr<OracleBackend>(
      new OracleBackend(std::move(dir), erosion_radius));
}

GroundTruth OracleBackend::LookUp(const ImageRef& image) const {
  if (png_dir_) {
    const auto file = *png_dir_ / (image.path.stem().string() + ".png");
    if (!std::filesystem::exists(file)) {
      throw Error(ErrorCode::kBackendFailure,
                  "no ground truth for image " + std::to_string(image.image_id) +
                      " at " + file.string());
    }
    const GrayImage ids = ReadGrayImage(file);
    return GroundTruth{image.image_id, file.filename().string(), ids.width,
                       ids.height, InstancesFromIdImage(ids)};
  }
  const std::string full = image.path.generic_string();
  const std::string base = image.path.filename().string();
  const GroundTruth* by_name = nullptr;
  const GroundTruth* by_base = nullptr;
  const GroundTruth* by_id = nullptr;
  for (const GroundTruth& gt : images_) {
    if (!full.empty() && gt.file_name == full && !by_name) by_name = &gt;
    if (!base.empty() &&
        std::filesystem::path(gt.file_name).filename().string() == base &&
        !by_base) {
      by_base = &gt;
    }
    if (gt.image_id == image.image_id && !by_id) by_id = &gt;
  }
  const GroundTruth* hit = by_name ? by_name : by_base ? by_base : by_id;
  if (!hit) {
    throw Error(ErrorCode::kBackendFailure,
                "no ground truth for image " + std::to_string(image.image_id));
  }
  return *hit;
}

PreparationReceipt OracleBackend::Prepare(const ImageRef& image) {
  {
    std::lock_guard lock(mutex_);
    if (prepared_.contains(image.image_id)) {
      return PreparationReceipt{image.image_id, true};
    }
  }
  GroundTruth gt = LookUp(image);
  if (gt.width != image.width || gt.height != image.height) {
    throw Error(ErrorCode::kBackendFailure,
                "ground truth for image " + std::to_string(image.image_id) +
                    " is " + std::to_string(gt.width) + "x" +
                    std::to_string(gt.height) + ", image is " +
                    std::to_string(image.width) + "x" +
                    std::to_string(image.height));
  }
  Prepared state;
  state.exact = std::move(gt.instances);
  for (const BinaryMask& m : state.exact) {
    state.eroded.push_back(ErodeMask(m, erosion_radius_));
  }
  std::lock_guard lock(mutex_);
  const bool existed = !prepared_.emplace(image.image_id, std::move(state)).second;
  return PreparationReceipt{image.image_id, existed};
}

bool OracleBackend::IsPrepared(int image_id) const {
  std::lock_guard lock(mutex_);
  return prepared_.contains(image_id);
}

const OracleBackend::Prepared& OracleBackend::PreparedFor(int image_id) const {
  std::lock_guard lock(mutex_);
  auto it = prepared_.find(image_id);
  if (it == prepared_.end()) {
    throw Error(ErrorCode::kUnprepared,
                "image " + std::to_string(image_id) + " is not prepared");
  }
  // Entries are never erased, so the reference outlives the lock.
  return it->second;
}

std::vector<MaskProposal> OracleBackend::Propose(const ImageRef& image,
                                                 const AutoSegmentParams&) {
  std::vector<MaskProposal> out;
  for (const BinaryMask& m : PreparedFor(image.image_id).eroded) {
    if (MaskArea(m) > 0) out.push_back(MaskProposal{m, 1.0});
  }
  return out;
}

MaskProposal OracleBackend::Prompt(const ImageRef& image,
                                   std::span<const PointPrompt> prompts) {
  const Prepared& state = PreparedFor(image.image_id);
  for (const PointPrompt& p : prompts) {
    if (p.polarity != Polarity::kPositive) continue;
    for (size_t i = state.exact.size(); i-- > 0;) {
      if (MaskContains(state.exact[i], p.x, p.y)) {
        const BinaryMask& m = state.eroded[i];
        return MaskProposal{m, MaskArea(m) > 0 ? 1.0 : 0.0};
      }
    }
    break;
  }
  return MaskProposal{BinaryMask::Empty(image.width, image.height), 0.0};
}

std::vector<BinaryMask> InstancesFromIdImage(const GrayImage& ids) {
  std::map<uint16_t, BinaryRaster> rasters;
  for (int row = 0; row < ids.height; ++row) {
    for (int col = 0; col < ids.width; ++col) {
      const uint16_t v = ids.values[static_cast<size_t>(row) * ids.width + col];
      if (v == 0) continue;
      auto it = rasters.try_emplace(v, ids.width, ids.height).first;
      it->second.set(row, col, true);
    }
  }
  std::vector<BinaryMask> out;
  for (const auto& [id, raster] : rasters) out.push_back(RleEncode(raster));
  return out;
}

}  // namespace coralab
