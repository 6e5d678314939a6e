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
#include "coralab/export.h"

#include <algorithm>
#include <array>
#include <map>

#include "coralab/error.h"
#include "coralab/format.h"
#include "coralab/semantic.h"

namespace coralab {
namespace {

std::string Int(int64_t v) { return std::to_string(v); }

std::array<uint8_t, 3> ParseColor(std::string_view hex) {
  if (!IsValidColor(hex)) {
    throw Error(ErrorCode::kValidation, "bad colour " + std::string(hex));
  }
  std::array<uint8_t, 3> rgb{};
  for (int i = 0; i < 3; ++i) {
    rgb[i] = static_cast<uint8_t>(
        std::stoi(std::string(hex.substr(1 + 2 * i, 2)), nullptr, 16));
  }
  return rgb;
}

std::string LabelName(const Project& project, int id) {
  for (const Label& l : project.labels) {
    if (l.id == id) return l.name;
  }
  return {};
}

void AppendReportRows(std::string& out, const StatsReport& r,
                      const Project& project) {
  const std::string scope =
      r.image_id ? "image:" + Int(*r.image_id) : std::string("project");
  int64_t instances = r.unassigned_instances;
  for (const auto& [id, s] : r.per_label) instances += s.instance_count;
  out += CsvRow({scope, "image", "all", "", Int(r.total_pixels), "1.0", "",
                 Int(instances)});
  out += CsvRow({scope, "coral", "all", "", Int(r.coral_pixels),
                 FormatReal(r.coverage),
                 FormatReal(r.coral_pixels > 0 ? 1.0 : 0.0), Int(instances)});
  for (const auto& [id, s] : r.per_label) {
    out += CsvRow({scope, "label", Int(id), LabelName(project, id),
                   Int(s.pixels), FormatReal(s.coverage_of_image),
                   FormatReal(s.fraction_of_coral), Int(s.instance_count)});
  }
  if (r.unassigned_instances > 0) {
    const double cov = r.total_pixels > 0
                           ? static_cast<double>(r.unassigned_pixels) /
                                 static_cast<double>(r.total_pixels)
                           : 0.0;
    const double frac = r.coral_pixels > 0
                            ? static_cast<double>(r.unassigned_pixels) /
                                  static_cast<double>(r.coral_pixels)
                            : 0.0;
    out += CsvRow({scope, "unassigned", "", "coral_unassigned",
                   Int(r.unassigned_pixels), FormatReal(cov), FormatReal(frac),
                   Int(r.unassigned_instances)});
  }
  for (const auto& [h, s] : r.health) {
    const double cov = r.total_pixels > 0
                           ? static_cast<double>(s.pixels) /
                                 static_cast<double>(r.total_pixels)
                           : 0.0;
    out += CsvRow({scope, "health", std::string(HealthName(h)), "",
                   Int(s.pixels), FormatReal(cov),
                   FormatReal(s.fraction_of_coral), Int(s.instance_count)});
  }
  out += CsvRow({scope, "rate", "bleaching_percentage", "", "", "",
                 FormatReal(BleachingPercentage(r)), ""});
  out += CsvRow({scope, "rate", "mortality_rate", "", "", "",
                 FormatReal(MortalityRate(r)), ""});
}

}  // namespace

std::string ExportInstancesCsv(const Project& project) {
  std::string out = std::string(kInstancesCsvHeader) + "\n";
  std::vector<const ImageEntry*> images;
  for (const ImageEntry& image : project.images) images.push_back(&image);
  std::sort(images.begin(), images.end(),
            [](const ImageEntry* a, const ImageEntry* b) { return a->id < b->id; });
  for (const ImageEntry* image : images) {
    std::vector<const LabeledInstance*> insts;
    for (const LabeledInstance& inst : InstancesOf(project, image->id)) {
      insts.push_back(&inst);
    }
    std::sort(insts.begin(), insts.end(), [](auto* a, auto* b) {
      return a->instance_id < b->instance_id;
    });
    const double pixels = static_cast<double>(int64_t{image->width} * image->height);
    for (const LabeledInstance* inst : insts) {
      const int64_t area = MaskArea(inst->mask);
      const BBox box = MaskBBox(inst->mask).value_or(BBox{});
      out += CsvRow({image->path, Int(inst->instance_id),
                     inst->label_id ? Int(*inst->label_id) : "",
                     inst->label_id ? LabelName(project, *inst->label_id) : "",
                     std::string(HealthName(inst->health)), Int(area),
                     FormatReal(static_cast<double>(area) / pixels), Int(box.x),
                     Int(box.y), Int(box.w), Int(box.h)});
    }
  }
  return out;
}

std::string ExportStatsCsv(std::span<const StatsReport> reports,
                           const Project& project) {
  std::string out = std::string(kStatsCsvHeader) + "\n";
  for (const StatsReport& r : reports) AppendReportRows(out, r, project);
  return out;
}

std::string ExportProjectStatsCsv(const Project& project) {
  std::vector<StatsReport> reports{ProjectStats(project)};
  for (const ImageEntry& image : project.images) {
    reports.push_back(ImageStats(project, image.id));
  }
  return ExportStatsCsv(reports, project);
}

uint8_t BlendChannel(uint8_t color, uint8_t base) {
  constexpr int kAlpha = 127;  // floor(0.5 * 255)
  return static_cast<uint8_t>(
      (kAlpha * color + (255 - kAlpha) * base + 127) / 255);
}

RgbImage RenderOverlayImage(const RgbImage& image,
                            std::span<const LabeledInstance> instances,
                            std::span<const Label> labels) {
  std::map<int, std::array<uint8_t, 3>> colors;
  for (const Label& l : labels) colors[l.id] = ParseColor(l.color);
  const auto gray = ParseColor(kUnassignedColor);

  // Last painter per pixel; each covered pixel is blended exactly once.
  std::vector<int32_t> owner(static_cast<size_t>(image.width) * image.height, -1);
  for (size_t idx : PaintOrder(instances)) {
    const LabeledInstance& inst = instances[idx];
    if (inst.mask.width() != image.width || inst.mask.height() != image.height) {
      throw Error(ErrorCode::kDimension, "instance mask does not match image");
    }
    ForEachSetPixel(inst.mask, [&](int row, int col) {
      owner[static_cast<size_t>(row) * image.width + col] =
          static_cast<int32_t>(idx);
    });
  }
  RgbImage out = image;
  for (size_t p = 0; p < owner.size(); ++p) {
    if (owner[p] < 0) continue;
    const LabeledInstance& inst = instances[static_cast<size_t>(owner[p])];
    std::array<uint8_t, 3> color = gray;
    if (inst.label_id) {
      auto it = colors.find(*inst.label_id);
      if (it != colors.end()) color = it->second;
    }
    for (int c = 0; c < 3; ++c) {
      out.rgb[3 * p + c] = BlendChannel(color[c], image.rgb[3 * p + c]);
    }
  }
  return out;
}

std::vector<uint8_t> RenderOverlay(std::span<const uint8_t> image_bytes,
                                   std::span<const LabeledInstance> instances,
                                   std::span<const Label> labels) {
  return EncodePng(RenderOverlayImage(DecodeImage(image_bytes), instances, labels));
}

}  // namespace coralab
