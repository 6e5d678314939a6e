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
#ifndef CORALAB_COCO_H_
#define CORALAB_COCO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "coralab/error.h"
#include "coralab/ground_truth.h"
#include "coralab/instance.h"
#include "coralab/project.h"
#include "json.hpp"

namespace coralab {

// Category name used for instances that have no label yet.
inline constexpr const char* kUnassignedCategory = "coral_unassigned";

struct CocoImage {
  int id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
};

struct CocoCategory {
  int id = 0;
  std::string name;
  std::string supercategory;
  std::string color;  // extension; empty when absent
};

struct CocoAnnotation {
  int64_t id = 0;
  int image_id = 0;
  int category_id = 0;
  BinaryMask segmentation;
  // From the "attributes" extension object, defaults when absent.
  HealthStatus health = HealthStatus::kUnspecified;
  std::optional<int64_t> instance_id;
  std::optional<int64_t> creation_index;
  double confidence = 1.0;
  InstanceSource source = InstanceSource::kManual;
};

struct CocoDataset {
  std::vector<CocoImage> images;
  std::vector<CocoCategory> categories;
  std::vector<CocoAnnotation> annotations;

  std::vector<GroundTruth> ToGroundTruth() const;
  // Rebuilds project images, taxonomy and instances. The unassigned
  // category maps back to unlabelled instances.
  Project ToProject(const ProjectConfig& config = {}) const;
};

// Problem found while validating a COCO document.
struct CocoIssue {
  std::string code;  // schema, duplicate_id, dangling_image,
                     // dangling_category, corrupt_rle, area_mismatch,
                     // bbox_mismatch, size_mismatch
  std::optional<int64_t> annotation_id;
  std::string message;
};

// Raised with ErrorCode::kValidation.
class CocoValidationError : public Error {
 public:
  explicit CocoValidationError(std::vector<CocoIssue> issues);
  const std::vector<CocoIssue>& issues() const { return issues_; }

 private:
  std::vector<CocoIssue> issues_;
};

// One annotation per instance ordered by (image_id, instance_id); health,
// instance id, creation index, confidence and source go into "attributes".
nlohmann::json ExportCoco(const Project& project);
// The exact bytes written by `export coco` and served by the API.
std::string ExportCocoText(const Project& project);

// Throws CocoValidationError listing every offending annotation.
CocoDataset ParseCoco(const nlohmann::json& doc);
CocoDataset ImportCoco(const std::filesystem::path& path);

}  // namespace coralab

#endif  // CORALAB_COCO_H_
