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
#include "coralab/coco.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "coralab/rle_json.h"

namespace coralab {
namespace {

using nlohmann::json;

std::string FormatIssues(const std::vector<CocoIssue>& issues) {
  std::string out = "invalid COCO document:";
  for (const CocoIssue& i : issues) {
    out += "\n  [" + i.code + "]";
    if (i.annotation_id) out += " annotation " + std::to_string(*i.annotation_id);
    out += " " + i.message;
  }
  return out;
}

json BBoxJson(const BinaryMask& mask) {
  const auto box = MaskBBox(mask);
  if (!box) return json::array({0, 0, 0, 0});
  return json::array({box->x, box->y, box->w, box->h});
}

bool IsInt(const json& j, const char* key) {
  return j.is_object() && j.contains(key) && j.at(key).is_number_integer();
}

}  // namespace

CocoValidationError::CocoValidationError(std::vector<CocoIssue> issues)
    : Error(ErrorCode::kValidation, FormatIssues(issues)),
      issues_(std::move(issues)) {}

nlohmann::json ExportCoco(const Project& project) {
  json images = json::array();
  std::vector<const ImageEntry*> sorted_images;
  for (const ImageEntry& image : project.images) sorted_images.push_back(&image);
  std::sort(sorted_images.begin(), sorted_images.end(),
            [](const ImageEntry* a, const ImageEntry* b) { return a->id < b->id; });
  for (const ImageEntry* image : sorted_images) {
    images.push_back({{"id", image->id},
                      {"file_name", image->path},
                      {"width", image->width},
                      {"height", image->height}});
  }

  std::vector<Label> labels = project.labels;
  std::sort(labels.begin(), labels.end(),
            [](const Label& a, const Label& b) { return a.id < b.id; });
  json categories = json::array();
  int max_label = 0;
  for (const Label& l : labels) {
    categories.push_back({{"id", l.id},
                          {"name", l.name},
                          {"supercategory", "coral"},
                          {"color", l.color}});
    max_label = std::max(max_label, l.id);
  }
  const int unassigned_id = max_label + 1;
  bool any_unassigned = false;

  json annotations = json::array();
  int64_t next_id = 1;
  for (const ImageEntry* image : sorted_images) {
    auto it = project.instances.find(image->id);
    if (it == project.instances.end()) continue;
    std::vector<const LabeledInstance*> insts;
    for (const LabeledInstance& inst : it->second) insts.push_back(&inst);
    std::sort(insts.begin(), insts.end(),
              [](const LabeledInstance* a, const LabeledInstance* b) {
                return a->instance_id < b->instance_id;
              });
    for (const LabeledInstance* inst : insts) {
      any_unassigned = any_unassigned || !inst->label_id;
      annotations.push_back(
          {{"id", next_id++},
           {"image_id", image->id},
           {"category_id", inst->label_id.value_or(unassigned_id)},
           {"segmentation", MaskToJson(inst->mask)},
           {"area", MaskArea(inst->mask)},
           {"bbox", BBoxJson(inst->mask)},
           {"iscrowd", 0},
           {"attributes",
            {{"health", HealthName(inst->health)},
             {"instance_id", inst->instance_id},
             {"creation_index", inst->creation_index},
             {"confidence", inst->confidence},
             {"source", SourceName(inst->source)}}}});
    }
  }
  if (any_unassigned) {
    categories.push_back({{"id", unassigned_id},
                          {"name", kUnassignedCategory},
                          {"supercategory", "coral"},
                          {"color", "#808080"}});
  }
  return json{{"images", std::move(images)},
              {"annotations", std::move(annotations)},
              {"categories", std::move(categories)}};
}

std::string ExportCocoText(const Project& project) {
  return ExportCoco(project).dump(2) + "\n";
}

CocoDataset ParseCoco(const nlohmann::json& doc) {
  std::vector<CocoIssue> issues;
  auto issue = [&](std::string code, std::optional<int64_t> ann,
                   std::string message) {
    issues.push_back({std::move(code), ann, std::move(message)});
  };
  CocoDataset out;
  if (!doc.is_object()) {
    throw CocoValidationError({{"schema", std::nullopt, "document must be an object"}});
  }
  for (const char* key : {"images", "annotations", "categories"}) {
    if (!doc.contains(key) || !doc.at(key).is_array()) {
      issue("schema", std::nullopt, std::string("\"") + key + "\" must be an array");
    }
  }
  if (!issues.empty()) throw CocoValidationError(std::move(issues));

  std::map<int, const CocoImage*> images;
  out.images.reserve(doc.at("images").size());
  for (const json& j : doc.at("images")) {
    if (!IsInt(j, "id") || !IsInt(j, "width") || !IsInt(j, "height") ||
        !j.contains("file_name") || !j.at("file_name").is_string()) {
      issue("schema", std::nullopt, "image entries need id, file_name, width, height");
      continue;
    }
    CocoImage image{j.at("id").get<int>(), j.at("file_name").get<std::string>(),
                    j.at("width").get<int>(), j.at("height").get<int>()};
    if (image.width < 1 || image.height < 1) {
      issue("schema", std::nullopt,
            "image " + std::to_string(image.id) + " has non-positive size");
      continue;
    }
    out.images.push_back(std::move(image));
  }
  for (const CocoImage& image : out.images) {
    if (!images.emplace(image.id, &image).second) {
      issue("duplicate_id", std::nullopt,
            "duplicate image id " + std::to_string(image.id));
    }
  }

  std::set<int> category_ids;
  for (const json& j : doc.at("categories")) {
    if (!IsInt(j, "id") || !j.contains("name") || !j.at("name").is_string()) {
      issue("schema", std::nullopt, "category entries need id and name");
      continue;
    }
    CocoCategory c{j.at("id").get<int>(), j.at("name").get<std::string>(),
                   j.value("supercategory", std::string()),
                   j.value("color", std::string())};
    if (!category_ids.insert(c.id).second) {
      issue("duplicate_id", std::nullopt,
            "duplicate category id " + std::to_string(c.id));
    }
    out.categories.push_back(std::move(c));
  }

  std::set<int64_t> annotation_ids;
  for (const json& j : doc.at("annotations")) {
    if (!IsInt(j, "id")) {
      issue("schema", std::nullopt, "annotation without integer id");
      continue;
    }
    const int64_t id = j.at("id").get<int64_t>();
    if (!annotation_ids.insert(id).second) {
      issue("duplicate_id", id, "duplicate annotation id");
      continue;
    }
    if (!IsInt(j, "image_id") || !IsInt(j, "category_id") ||
        !j.contains("segmentation") || !IsInt(j, "area") ||
        !j.contains("bbox") || !j.at("bbox").is_array()) {
      issue("schema", id,
            "annotation needs image_id, category_id, segmentation, area, bbox");
      continue;
    }
    const int image_id = j.at("image_id").get<int>();
    const int category_id = j.at("category_id").get<int>();
    auto image_it = images.find(image_id);
    if (image_it == images.end()) {
      issue("dangling_image", id,
            "references missing image " + std::to_string(image_id));
      continue;
    }
    if (!category_ids.contains(category_id)) {
      issue("dangling_category", id,
            "references missing category " + std::to_string(category_id));
      continue;
    }
    std::optional<BinaryMask> mask;
    try {
      mask = MaskFromJson(j.at("segmentation"));
    } catch (const Error& e) {
      issue("corrupt_rle", id, e.what());
      continue;
    }
    const CocoImage& image = *image_it->second;
    if (mask->width() != image.width || mask->height() != image.height) {
      issue("size_mismatch", id, "segmentation size differs from image size");
      continue;
    }
    const int64_t area = MaskArea(*mask);
    if (j.at("area").get<int64_t>() != area) {
      issue("area_mismatch", id,
            "stated area " + std::to_string(j.at("area").get<int64_t>()) +
                " but segmentation has " + std::to_string(area));
    }
    if (j.at("bbox") != BBoxJson(*mask)) {
      issue("bbox_mismatch", id,
            "stated bbox " + j.at("bbox").dump() + " but segmentation gives " +
                BBoxJson(*mask).dump());
    }
    CocoAnnotation ann{.id = id,
                       .image_id = image_id,
                       .category_id = category_id,
                       .segmentation = std::move(*mask)};
    if (j.contains("attributes") && j.at("attributes").is_object()) {
      const json& attrs = j.at("attributes");
      try {
        if (attrs.contains("health")) {
          ann.health = ParseHealth(attrs.at("health").get<std::string>());
        }
        if (attrs.contains("source")) {
          ann.source = ParseSource(attrs.at("source").get<std::string>());
        }
        if (attrs.contains("instance_id")) {
          ann.instance_id = attrs.at("instance_id").get<int64_t>();
        }
        if (attrs.contains("creation_index")) {
          ann.creation_index = attrs.at("creation_index").get<int64_t>();
        }
        if (attrs.contains("confidence")) {
          ann.confidence = attrs.at("confidence").get<double>();
        }
      } catch (const std::exception& e) {
        issue("schema", id, std::string("bad attributes: ") + e.what());
        continue;
      }
    }
    out.annotations.push_back(std::move(ann));
  }
  if (!issues.empty()) throw CocoValidationError(std::move(issues));
  return out;
}

CocoDataset ImportCoco(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw CocoValidationError(
        {{"schema", std::nullopt, path.string() + " is not JSON: " + e.what()}});
  }
  return ParseCoco(doc);
}

std::vector<GroundTruth> CocoDataset::ToGroundTruth() const {
  std::vector<GroundTruth> out;
  std::map<int, size_t> index;
  for (const CocoImage& image : images) {
    index[image.id] = out.size();
    out.push_back(GroundTruth{image.id, image.file_name, image.width,
                              image.height, {}});
  }
  for (const CocoAnnotation& ann : annotations) {
    out[index.at(ann.image_id)].instances.push_back(ann.segmentation);
  }
  return out;
}

Project CocoDataset::ToProject(const ProjectConfig& config) const {
  Project project;
  project.config = config;
  for (const CocoImage& image : images) {
    project.images.push_back(ImageEntry{.id = image.id,
                                        .path = image.file_name,
                                        .width = image.width,
                                        .height = image.height});
  }
  std::optional<int> unassigned;
  for (const CocoCategory& c : categories) {
    if (c.name == kUnassignedCategory) {
      unassigned = c.id;
      continue;
    }
    project.labels.push_back(
        Label{c.id, c.name, IsValidColor(c.color) ? c.color : "#808080"});
  }
  std::map<int, int64_t> next_index;
  for (const CocoAnnotation& ann : annotations) {
    auto& list = project.instances[ann.image_id];
    int64_t& next = next_index[ann.image_id];
    const int64_t index = ann.creation_index.value_or(
        ann.instance_id.value_or(next + 1));
    list.push_back(LabeledInstance{
        .instance_id = ann.instance_id.value_or(index),
        .mask = ann.segmentation,
        .label_id = (unassigned && ann.category_id == *unassigned)
                        ? std::nullopt
                        : std::optional<int>(ann.category_id),
        .health = ann.health,
        .confidence = ann.confidence,
        .source = ann.source,
        .creation_index = index});
    next = std::max(next, index);
  }
  for (auto& [image_id, list] : project.instances) {
    std::stable_sort(list.begin(), list.end(),
                     [](const LabeledInstance& a, const LabeledInstance& b) {
                       return a.creation_index < b.creation_index;
                     });
  }
  for (ImageEntry& image : project.images) {
    image.next_creation_index = next_index[image.id] + 1;
  }
  ValidateProject(project);
  return project;
}

}  // namespace coralab
