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
#ifndef CORALAB_EXPORT_H_
#define CORALAB_EXPORT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coralab/analytics.h"
#include "coralab/image_io.h"
#include "coralab/instance.h"
#include "coralab/project.h"

namespace coralab {

inline constexpr const char* kInstancesCsvHeader =
    "image,instance_id,label_id,label_name,health,area_px,area_fraction,"
    "bbox_x,bbox_y,bbox_w,bbox_h";
inline constexpr const char* kStatsCsvHeader =
    "scope,group,key,name,pixels,coverage_of_image,fraction_of_coral,"
    "instance_count";

// One row per instance ordered by (image id, instance id). Unlabelled
// instances have empty label columns.
std::string ExportInstancesCsv(const Project& project);

// Header plus the rows of each report, in the order given.
std::string ExportStatsCsv(std::span<const StatsReport> reports,
                           const Project& project);
// Project report followed by every image report.
std::string ExportProjectStatsCsv(const Project& project);

// Gray used for unlabelled instances in overlays.
inline constexpr const char* kUnassignedColor = "#808080";

// alpha = 127/255; out = (127 * color + 128 * base + 127) / 255 in integers.
uint8_t BlendChannel(uint8_t color, uint8_t base);

// Paints instance masks over the image in creation order, each blended once
// in its label colour. Throws kDimension on size mismatch.
RgbImage RenderOverlayImage(const RgbImage& image,
                            std::span<const LabeledInstance> instances,
                            std::span<const Label> labels);
std::vector<uint8_t> RenderOverlay(std::span<const uint8_t> image_bytes,
                                   std::span<const LabeledInstance> instances,
                                   std::span<const Label> labels);

}  // namespace coralab

#endif  // CORALAB_EXPORT_H_
