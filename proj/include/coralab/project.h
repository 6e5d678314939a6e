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
#ifndef CORALAB_PROJECT_H_
#define CORALAB_PROJECT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coralab/instance.h"
#include "coralab/mask.h"
#include "json.hpp"

namespace coralab {

inline constexpr int kProjectSchemaVersion = 1;

struct Label {
  int id = 0;
  std::string name;
  std::string color;  // "#RRGGBB"

  friend bool operator==(const Label&, const Label&) = default;
};

struct ImageEntry {
  int id = 0;
  std::string path;  // relative to the project file's directory
  int width = 0;
  int height = 0;
  bool prepared = false;
  std::string site;  // optional free-text collection site
  // Next creation index (and instance id) handed out on this image.
  int64_t next_creation_index = 1;

  friend bool operator==(const ImageEntry&, const ImageEntry&) = default;
};

struct ProjectConfig {
  double min_area_fraction = 0.0;
  double confidence_threshold = 0.0;

  friend bool operator==(const ProjectConfig&, const ProjectConfig&) = default;
};

struct Project {
  int schema_version = kProjectSchemaVersion;
  std::vector<ImageEntry> images;
  std::vector<Label> labels;
  std::map<int, std::vector<LabeledInstance>> instances;
  ProjectConfig config;

  friend bool operator==(const Project&, const Project&) = default;
};

struct ImportError {
  std::string path;
  std::string message;
};

struct ImportResult {
  Project project;
  std::vector<ImportError> errors;
};

bool IsValidColor(std::string_view color);

// Imports images in the given order; unreadable files are skipped and
// reported. Stored paths are relative to `base_dir`. Throws kImport when
// nothing could be imported and kValidation for a bad config.
ImportResult CreateProject(std::span<const std::filesystem::path> image_paths,
                           const ProjectConfig& config,
                           const std::filesystem::path& base_dir);

// Every stride-th path of the sorted list, starting with the first.
std::vector<std::filesystem::path> SampleImages(
    std::vector<std::filesystem::path> paths, int stride);

// Edit operations. Each either completes or throws leaving the project
// untouched.
void DefineLabels(Project& project, std::vector<Label> labels);
int64_t AddInstance(Project& project, int image_id, BinaryMask mask,
                    InstanceSource source, double confidence = 1.0);
void RemoveInstance(Project& project, int image_id, int64_t instance_id);
void AssignLabel(Project& project, int image_id, int64_t instance_id,
                 int label_id);
void ClearLabel(Project& project, int image_id, int64_t instance_id);
void AssignHealth(Project& project, int image_id, int64_t instance_id,
                  HealthStatus health);
void MarkPrepared(Project& project, int image_id);

const ImageEntry& FindImage(const Project& project, int image_id);
const Label& FindLabel(const Project& project, int label_id);
const LabeledInstance& FindInstance(const Project& project, int image_id,
                                    int64_t instance_id);
// Empty span when the image has no instances.
std::span<const LabeledInstance> InstancesOf(const Project& project,
                                             int image_id);

// Referential-integrity and range checks; empty when the project is valid.
std::vector<std::string> CheckProject(const Project& project);
// Throws kCorruptProject listing every problem found by CheckProject.
void ValidateProject(const Project& project);

nlohmann::json ProjectToJson(const Project& project);
// Throws kUnsupportedVersion or kCorruptProject.
Project ProjectFromJson(const nlohmann::json& doc);

// Writes via a temporary file renamed over the target, so a failure at any
// point leaves the previous file intact.
void SaveProject(const Project& project, const std::filesystem::path& path);
Project LoadProject(const std::filesystem::path& path);

}  // namespace coralab

#endif  // CORALAB_PROJECT_H_
