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
#include "coralab/project.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <utility>

#include "coralab/error.h"
#include "coralab/fault.h"
#include "coralab/image_io.h"
#include "coralab/rle_json.h"
#include "coralab/semantic.h"

namespace coralab {
namespace {

using nlohmann::json;

std::string Str(int64_t v) { return std::to_string(v); }

void CheckConfig(const ProjectConfig& config,
                 std::vector<std::string>& problems) {
  if (!(config.min_area_fraction >= 0.0 && config.min_area_fraction < 1.0)) {
    problems.push_back("config.min_area_fraction must be in [0,1)");
  }
  if (!(config.confidence_threshold >= 0.0 &&
        config.confidence_threshold <= 1.0)) {
    problems.push_back("config.confidence_threshold must be in [0,1]");
  }
}

std::vector<std::string> CheckLabels(std::span<const Label> labels) {
  std::vector<std::string> problems;
  std::set<int> ids;
  std::set<std::string> names;
  for (const Label& label : labels) {
    if (label.id < 1 || label.id > SemanticRaster::kMaxLabelId) {
      problems.push_back("label id " + Str(label.id) + " out of range");
    }
    if (!ids.insert(label.id).second) {
      problems.push_back("duplicate label id " + Str(label.id));
    }
    if (label.name.empty()) {
      problems.push_back("label " + Str(label.id) + " has an empty name");
    } else if (!names.insert(label.name).second) {
      problems.push_back("duplicate label name \"" + label.name + "\"");
    }
    if (!IsValidColor(label.color)) {
      problems.push_back("label " + Str(label.id) + " color \"" + label.color +
                         "\" is not #RRGGBB");
    }
  }
  return problems;
}

ImageEntry& MutableImage(Project& project, int image_id) {
  for (ImageEntry& image : project.images) {
    if (image.id == image_id) return image;
  }
  throw Error(ErrorCode::kNotFound, "unknown image " + Str(image_id));
}

LabeledInstance& MutableInstance(Project& project, int image_id,
                                 int64_t instance_id) {
  MutableImage(project, image_id);
  auto it = project.instances.find(image_id);
  if (it != project.instances.end()) {
    for (LabeledInstance& inst : it->second) {
      if (inst.instance_id == instance_id) return inst;
    }
  }
  throw Error(ErrorCode::kNotFound, "unknown instance " + Str(instance_id) +
                                        " on image " + Str(image_id));
}

json InstanceToJson(const LabeledInstance& inst) {
  return json{{"instance_id", inst.instance_id},
              {"label_id", inst.label_id ? json(*inst.label_id) : json()},
              {"health", HealthName(inst.health)},
              {"confidence", inst.confidence},
              {"source", SourceName(inst.source)},
              {"creation_index", inst.creation_index},
              {"mask", MaskToJson(inst.mask)}};
}

LabeledInstance InstanceFromJson(const json& j) {
  const json& label = j.at("label_id");
  return LabeledInstance{
      .instance_id = j.at("instance_id").get<int64_t>(),
      .mask = MaskFromJson(j.at("mask")),
      .label_id = label.is_null() ? std::nullopt
                                  : std::optional<int>(label.get<int>()),
      .health = ParseHealth(j.at("health").get<std::string>()),
      .confidence = j.at("confidence").get<double>(),
      .source = ParseSource(j.at("source").get<std::string>()),
      .creation_index = j.at("creation_index").get<int64_t>()};
}

std::string RelativeTo(const std::filesystem::path& path,
                       const std::filesystem::path& base_dir) {
  const auto abs_path = std::filesystem::absolute(path).lexically_normal();
  const auto abs_base = std::filesystem::absolute(base_dir).lexically_normal();
  auto rel = abs_path.lexically_relative(abs_base);
  if (rel.empty()) rel = abs_path;
  return rel.generic_string();
}

}  // namespace

bool IsValidColor(std::string_view color) {
  if (color.size() != 7 || color[0] != '#') return false;
  return std::all_of(color.begin() + 1, color.end(),
                     [](unsigned char c) { return std::isxdigit(c) != 0; });
}

ImportResult CreateProject(std::span<const std::filesystem::path> image_paths,
                           const ProjectConfig& config,
                           const std::filesystem::path& base_dir) {
  std::vector<std::string> problems;
  CheckConfig(config, problems);
  if (!problems.empty()) throw Error(ErrorCode::kValidation, problems.front());

  ImportResult result;
  result.project.config = config;
  std::set<std::string> seen;
  int next_id = 1;
  for (const auto& path : image_paths) {
    const std::string rel = RelativeTo(path, base_dir);
    if (!seen.insert(rel).second) {
      result.errors.push_back({path.string(), "duplicate image path"});
      continue;
    }
    try {
      const ImageInfo info = ReadImageInfo(path);
      result.project.images.push_back(
          ImageEntry{.id = next_id++,
                     .path = rel,
                     .width = info.width,
                     .height = info.height});
    } catch (const Error& e) {
      result.errors.push_back({path.string(), e.what()});
    }
  }
  if (result.project.images.empty()) {
    throw Error(ErrorCode::kImport,
                image_paths.empty() ? "no images given"
                                    : "none of the images could be imported");
  }
  return result;
}

std::vector<std::filesystem::path> SampleImages(
    std::vector<std::filesystem::path> paths, int stride) {
  if (stride < 1) {
    throw Error(ErrorCode::kValidation, "sampling stride must be >= 1");
  }
  std::sort(paths.begin(), paths.end());
  std::vector<std::filesystem::path> out;
  for (size_t i = 0; i < paths.size(); i += static_cast<size_t>(stride)) {
    out.push_back(paths[i]);
  }
  return out;
}

void DefineLabels(Project& project, std::vector<Label> labels) {
  const auto problems = CheckLabels(labels);
  if (!problems.empty()) throw Error(ErrorCode::kValidation, problems.front());
  std::set<int> ids;
  for (const Label& l : labels) ids.insert(l.id);
  project.labels = std::move(labels);
  for (auto& [image_id, list] : project.instances) {
    for (LabeledInstance& inst : list) {
      if (inst.label_id && !ids.contains(*inst.label_id)) {
        inst.label_id.reset();
      }
    }
  }
}

int64_t AddInstance(Project& project, int image_id, BinaryMask mask,
                    InstanceSource source, double confidence) {
  ImageEntry& image = MutableImage(project, image_id);
  if (mask.width() != image.width || mask.height() != image.height) {
    throw Error(ErrorCode::kDimension,
                "mask is " + Str(mask.width()) + "x" + Str(mask.height()) +
                    " but image " + Str(image_id) + " is " + Str(image.width) +
                    "x" + Str(image.height));
  }
  if (MaskArea(mask) < 1) {
    throw Error(ErrorCode::kValidation, "cannot add an empty mask");
  }
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw Error(ErrorCode::kValidation, "confidence must be in [0,1]");
  }
  const int64_t index = image.next_creation_index;
  project.instances[image_id].push_back(
      LabeledInstance{.instance_id = index,
                      .mask = std::move(mask),
                      .label_id = std::nullopt,
                      .health = HealthStatus::kUnspecified,
                      .confidence =
                          source == InstanceSource::kManual ? 1.0 : confidence,
                      .source = source,
                      .creation_index = index});
  ++image.next_creation_index;
  return index;
}

void RemoveInstance(Project& project, int image_id, int64_t instance_id) {
  MutableInstance(project, image_id, instance_id);
  auto& list = project.instances[image_id];
  std::erase_if(list, [&](const LabeledInstance& inst) {
    return inst.instance_id == instance_id;
  });
}

void AssignLabel(Project& project, int image_id, int64_t instance_id,
                 int label_id) {
  LabeledInstance& inst = MutableInstance(project, image_id, instance_id);
  FindLabel(project, label_id);
  inst.label_id = label_id;
}

void ClearLabel(Project& project, int image_id, int64_t instance_id) {
  MutableInstance(project, image_id, instance_id).label_id.reset();
}

void AssignHealth(Project& project, int image_id, int64_t instance_id,
                  HealthStatus health) {
  MutableInstance(project, image_id, instance_id).health = health;
}

void MarkPrepared(Project& project, int image_id) {
  MutableImage(project, image_id).prepared = true;
}

const ImageEntry& FindImage(const Project& project, int image_id) {
  for (const ImageEntry& image : project.images) {
    if (image.id == image_id) return image;
  }
  throw Error(ErrorCode::kNotFound, "unknown image " + Str(image_id));
}

const Label& FindLabel(const Project& project, int label_id) {
  for (const Label& label : project.labels) {
    if (label.id == label_id) return label;
  }
  throw Error(ErrorCode::kNotFound, "unknown label " + Str(label_id));
}

const LabeledInstance& FindInstance(const Project& project, int image_id,
                                    int64_t instance_id) {
  return MutableInstance(const_cast<Project&>(project), image_id, instance_id);
}

std::span<const LabeledInstance> InstancesOf(const Project& project,
                                             int image_id) {
  FindImage(project, image_id);
  auto it = project.instances.find(image_id);
  if (it == project.instances.end()) return {};
  return it->second;
}

std::vector<std::string> CheckProject(const Project& project) {
  std::vector<std::string> problems;
  if (project.schema_version != kProjectSchemaVersion) {
    problems.push_back("schema_version " + Str(project.schema_version) +
                       " is not " + Str(kProjectSchemaVersion));
  }
  CheckConfig(project.config, problems);

  std::map<int, const ImageEntry*> images;
  std::set<std::string> paths;
  for (const ImageEntry& image : project.images) {
    const std::string where = "image " + Str(image.id);
    if (image.id < 1) problems.push_back(where + ": id must be positive");
    if (!images.emplace(image.id, &image).second) {
      problems.push_back(where + ": duplicate id");
    }
    if (image.path.empty()) {
      problems.push_back(where + ": empty path");
    } else if (!paths.insert(image.path).second) {
      problems.push_back(where + ": duplicate path " + image.path);
    }
    if (image.width < 1 || image.height < 1) {
      problems.push_back(where + ": dimensions must be positive");
    }
    if (image.next_creation_index < 1) {
      problems.push_back(where + ": next_creation_index must be positive");
    }
  }

  for (std::string& p : CheckLabels(project.labels)) {
    problems.push_back(std::move(p));
  }
  std::set<int> label_ids;
  for (const Label& l : project.labels) label_ids.insert(l.id);

  for (const auto& [image_id, list] : project.instances) {
    auto it = images.find(image_id);
    if (it == images.end()) {
      problems.push_back("instances reference unknown image " + Str(image_id));
      continue;
    }
    const ImageEntry& image = *it->second;
    std::set<int64_t> ids;
    int64_t last_index = 0;
    for (const LabeledInstance& inst : list) {
      const std::string where = "image " + Str(image_id) + " instance " +
                                Str(inst.instance_id);
      if (inst.instance_id < 1) problems.push_back(where + ": id must be positive");
      if (!ids.insert(inst.instance_id).second) {
        problems.push_back(where + ": duplicate id");
      }
      if (inst.mask.width() != image.width ||
          inst.mask.height() != image.height) {
        problems.push_back(where + ": mask size does not match image");
      }
      if (MaskArea(inst.mask) < 1) problems.push_back(where + ": empty mask");
      if (inst.label_id && !label_ids.contains(*inst.label_id)) {
        problems.push_back(where + ": references missing label " +
                           Str(*inst.label_id));
      }
      if (!(inst.confidence >= 0.0 && inst.confidence <= 1.0)) {
        problems.push_back(where + ": confidence out of [0,1]");
      }
      if (inst.creation_index <= last_index) {
        problems.push_back(where + ": creation_index not increasing");
      }
      if (inst.creation_index >= image.next_creation_index) {
        problems.push_back(where + ": creation_index beyond image counter");
      }
      last_index = inst.creation_index;
    }
  }
  return problems;
}

void ValidateProject(const Project& project) {
  const auto problems = CheckProject(project);
  if (problems.empty()) return;
  std::string message = "invalid project:";
  for (const auto& p : problems) message += "\n  " + p;
  throw Error(ErrorCode::kCorruptProject, message);
}

nlohmann::json ProjectToJson(const Project& project) {
  json images = json::array();
  for (const ImageEntry& image : project.images) {
    images.push_back({{"id", image.id},
                      {"path", image.path},
                      {"width", image.width},
                      {"height", image.height},
                      {"prepared", image.prepared},
                      {"site", image.site},
                      {"next_creation_index", image.next_creation_index}});
  }
  json labels = json::array();
  for (const Label& label : project.labels) {
    labels.push_back(
        {{"id", label.id}, {"name", label.name}, {"color", label.color}});
  }
  json instances = json::object();
  for (const auto& [image_id, list] : project.instances) {
    json arr = json::array();
    for (const LabeledInstance& inst : list) arr.push_back(InstanceToJson(inst));
    instances[std::to_string(image_id)] = std::move(arr);
  }
  return json{{"schema_version", project.schema_version},
              {"config",
               {{"min_area_fraction", project.config.min_area_fraction},
                {"confidence_threshold", project.config.confidence_threshold}}},
              {"images", std::move(images)},
              {"labels", std::move(labels)},
              {"instances", std::move(instances)}};
}

Project ProjectFromJson(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("schema_version") ||
      !doc.at("schema_version").is_number_integer()) {
    throw Error(ErrorCode::kCorruptProject, "missing schema_version");
  }
  const int version = doc.at("schema_version").get<int>();
  if (version != kProjectSchemaVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "unsupported project schema_version " + Str(version) +
                    " (supported: " + Str(kProjectSchemaVersion) + ")");
  }
  Project project;
  try {
    const json& config = doc.at("config");
    project.config.min_area_fraction =
        config.at("min_area_fraction").get<double>();
    project.config.confidence_threshold =
        config.at("confidence_threshold").get<double>();
    for (const json& j : doc.at("images")) {
      project.images.push_back(ImageEntry{
          .id = j.at("id").get<int>(),
          .path = j.at("path").get<std::string>(),
          .width = j.at("width").get<int>(),
          .height = j.at("height").get<int>(),
          .prepared = j.at("prepared").get<bool>(),
          .site = j.value("site", std::string()),
          .next_creation_index = j.at("next_creation_index").get<int64_t>()});
    }
    for (const json& j : doc.at("labels")) {
      project.labels.push_back(Label{j.at("id").get<int>(),
                                     j.at("name").get<std::string>(),
                                     j.at("color").get<std::string>()});
    }
    for (const auto& [key, arr] : doc.at("instances").items()) {
      size_t consumed = 0;
      const int image_id = std::stoi(key, &consumed);
      if (consumed != key.size()) {
        throw Error(ErrorCode::kCorruptProject, "bad image key " + key);
      }
      auto& list = project.instances[image_id];
      for (const json& j : arr) list.push_back(InstanceFromJson(j));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptProject,
                std::string("malformed project document: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::kCorruptProject,
                std::string("malformed project document: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruptProject,
                std::string("malformed project document: ") + e.what());
  }
  ValidateProject(project);
  return project;
}

void SaveProject(const Project& project, const std::filesystem::path& path) {
  const std::string text = ProjectToJson(project).dump(2) + "\n";
  FaultInjector::Hit("save.after_serialize");

  std::filesystem::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw Error(ErrorCode::kIo, "cannot create " + tmp.string());
  bool closed = false;
  try {
    FaultInjector::Hit("save.after_open");
    auto write_all = [&](const char* data, size_t size) {
      while (size > 0) {
        const ssize_t n = ::write(fd, data, size);
        if (n < 0) throw Error(ErrorCode::kIo, "write failed: " + tmp.string());
        data += n;
        size -= static_cast<size_t>(n);
      }
    };
    const size_t half = text.size() / 2;
    write_all(text.data(), half);
    FaultInjector::Hit("save.mid_write");
    write_all(text.data() + half, text.size() - half);
    FaultInjector::Hit("save.after_write");
    if (::fsync(fd) != 0) throw Error(ErrorCode::kIo, "fsync failed");
    FaultInjector::Hit("save.after_flush");
    closed = true;
    if (::close(fd) != 0) throw Error(ErrorCode::kIo, "close failed");
    FaultInjector::Hit("save.after_close");
    FaultInjector::Hit("save.before_rename");
    std::filesystem::rename(tmp, path);
  } catch (...) {
    if (!closed) ::close(fd);
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

Project LoadProject(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptProject,
                path.string() + " is not valid JSON: " + e.what());
  }
  return ProjectFromJson(doc);
}

}  // namespace coralab
