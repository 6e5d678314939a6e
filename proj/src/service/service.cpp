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
#include "coralab/service.h"

#include <algorithm>
#include <cstdio>
#include <regex>
#include <set>

#include "coralab/analytics.h"
#include "coralab/coco.h"
#include "coralab/export.h"
#include "coralab/fault.h"
#include "coralab/image_io.h"
#include "coralab/rle_json.h"

namespace coralab {
namespace {

using nlohmann::json;

class Fnv1a {
 public:
  void Bytes(const void* data, size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001B3ULL;
    }
  }
  template <typename T>
  void Value(const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    Bytes(&v, sizeof(v));
  }
  uint64_t hash() const { return hash_; }

 private:
  uint64_t hash_ = 0xCBF29CE484222325ULL;
};

ApiError MakeError(int status, std::string code, std::string message,
                   json details = nullptr) {
  return ApiError{status, std::move(code), std::move(message), std::move(details)};
}

// Thrown inside a request to short-circuit with a specific API error.
struct ApiFailure {
  ApiError error;
};

json ParseBody(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    json j = json::parse(body);
    if (!j.is_object()) {
      throw ApiFailure{MakeError(400, "validation", "request body must be a JSON object")};
    }
    return j;
  } catch (const json::parse_error& e) {
    throw ApiFailure{MakeError(400, "validation", std::string("malformed JSON: ") + e.what())};
  }
}

json BBoxJson(const BinaryMask& mask) {
  const auto box = MaskBBox(mask);
  if (!box) return nullptr;
  return json::array({box->x, box->y, box->w, box->h});
}

json InstanceJson(const LabeledInstance& inst) {
  return json{{"instance_id", inst.instance_id},
              {"label_id", inst.label_id ? json(*inst.label_id) : json()},
              {"health", HealthName(inst.health)},
              {"confidence", inst.confidence},
              {"source", SourceName(inst.source)},
              {"creation_index", inst.creation_index},
              {"area", MaskArea(inst.mask)},
              {"bbox", BBoxJson(inst.mask)},
              {"mask", MaskToJson(inst.mask)}};
}

json ProposalJson(const MaskProposal& p) {
  return json{{"mask", MaskToJson(p.mask)},
              {"confidence", p.confidence},
              {"area", MaskArea(p.mask)},
              {"bbox", BBoxJson(p.mask)}};
}

json LabelsJson(const Project& project) {
  json out = json::array();
  for (const Label& l : project.labels) {
    out.push_back({{"id", l.id}, {"name", l.name}, {"color", l.color}});
  }
  return out;
}

// Typed field access that reports validation errors with the field name.
template <typename T>
T Field(const json& obj, const char* key) {
  if (!obj.contains(key)) {
    throw ApiFailure{MakeError(400, "validation", std::string("missing field \"") + key + "\"")};
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ApiFailure{MakeError(400, "validation", std::string("bad field \"") + key + "\"")};
  }
}

template <typename T>
T FieldOr(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  return Field<T>(obj, key);
}

void CheckRevision(const Project& project, int image_id, const json& body) {
  const std::string want = Field<std::string>(body, "revision");
  const std::string have = InstancesRevision(project, image_id);
  if (want != have) {
    throw ApiFailure{MakeError(409, "conflict",
                               "instance list of image " + std::to_string(image_id) +
                                   " changed since revision " + want,
                               {{"revision", have}})};
  }
}

std::string ContentTypeFor(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".png") return "image/png";
  if (ext == ".webp") return "image/webp";
  return "image/jpeg";
}

ApiResponse JsonResponse(const json& j, int status = 200) {
  return ApiResponse{status, "application/json", j.dump() + "\n"};
}

}  // namespace

json ApiError::ToJson() const {
  return json{{"error", {{"code", code}, {"message", message}, {"details", details}}}};
}

ApiError ApiErrorFor(const Error& error) {
  switch (error.code()) {
    case ErrorCode::kNotFound:
      return MakeError(404, "not_found", error.what());
    case ErrorCode::kConflict:
    case ErrorCode::kUnprepared:
      return MakeError(409, "conflict", error.what());
    case ErrorCode::kUnsupportedVersion:
      return MakeError(400, "version", error.what());
    case ErrorCode::kBackendUnavailable:
      return MakeError(503, "backend_unavailable", error.what());
    case ErrorCode::kBackendFailure:
      return MakeError(503, "backend_unavailable", error.what(),
                       {{"reason", "backend reported a failure"}});
    case ErrorCode::kIo:
    case ErrorCode::kInjectedFault:
      return MakeError(500, "internal", error.what());
    case ErrorCode::kDimension:
    case ErrorCode::kCorruptMask:
    case ErrorCode::kValidation:
    case ErrorCode::kCorruptProject:
    case ErrorCode::kDegenerateInput:
    case ErrorCode::kImport:
      break;
  }
  if (const auto* coco = dynamic_cast<const CocoValidationError*>(&error)) {
    json issues = json::array();
    for (const CocoIssue& i : coco->issues()) {
      issues.push_back({{"code", i.code},
                        {"annotation_id", i.annotation_id ? json(*i.annotation_id) : json()},
                        {"message", i.message}});
    }
    return MakeError(400, "validation", error.what(), {{"issues", issues}});
  }
  return MakeError(400, "validation", error.what());
}

std::string InstancesRevision(const Project& project, int image_id) {
  Fnv1a h;
  h.Value(FindImage(project, image_id).next_creation_index);
  for (const LabeledInstance& inst : InstancesOf(project, image_id)) {
    h.Value(inst.instance_id);
    h.Value(inst.creation_index);
    h.Value(inst.label_id.value_or(-1));
    h.Value(static_cast<int>(inst.health));
    h.Value(static_cast<int>(inst.source));
    h.Value(inst.confidence);
    h.Value(inst.mask.width());
    h.Value(inst.mask.height());
    const auto& counts = inst.mask.counts();
    h.Value(counts.size());
    h.Bytes(counts.data(), counts.size() * sizeof(counts[0]));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h.hash()));
  return buf;
}

ProjectService::ProjectService(std::filesystem::path project_path,
                               std::shared_ptr<SegmentationBackend> backend,
                               std::string backend_name)
    : path_(std::move(project_path)),
      dir_(std::filesystem::absolute(path_).parent_path()),
      backend_(std::move(backend)),
      backend_name_(std::move(backend_name)),
      project_(LoadProject(path_)) {}

Project ProjectService::Snapshot() const {
  std::shared_lock lock(mu_);
  return project_;
}

template <typename Fn>
auto ProjectService::Mutate(Fn&& fn) {
  std::unique_lock lock(mu_);
  FaultInjector::Hit("mutation.begin");
  Project next = project_;
  auto result = fn(next);
  FaultInjector::Hit("mutation.after_apply");
  ValidateProject(next);
  FaultInjector::Hit("mutation.after_validate");
  SaveProject(next, path_);
  project_ = std::move(next);
  return result;
}

ApiResponse ProjectService::Handle(const ApiRequest& request) {
  try {
    return Route(request);
  } catch (const ApiFailure& f) {
    return JsonResponse(f.error.ToJson(), f.error.status);
  } catch (const Error& e) {
    const ApiError err = ApiErrorFor(e);
    return JsonResponse(err.ToJson(), err.status);
  } catch (const std::exception& e) {
    const ApiError err = MakeError(500, "internal", e.what());
    return JsonResponse(err.ToJson(), err.status);
  }
}

ApiResponse ProjectService::Route(const ApiRequest& req) {
  static const std::regex kImage(R"(/api/images/(\d{1,9})(/[a-z]+)?)");
  static const std::regex kExport(R"(/api/export/([a-z]+))");
  const std::string& m = req.method;
  std::smatch match;

  if (req.path == "/api/project" && m == "GET") return JsonResponse(ProjectSummary());
  if (req.path == "/api/images" && m == "GET") return JsonResponse(ImagesJson());
  if (req.path == "/api/labels") {
    if (m == "GET") {
      std::shared_lock lock(mu_);
      return JsonResponse(json{{"labels", LabelsJson(project_)}});
    }
    if (m == "PUT") return JsonResponse(PutLabels(ParseBody(req.body)));
  }
  if (req.path == "/api/stats" && m == "GET") {
    std::shared_lock lock(mu_);
    return JsonResponse(StatsToJson(ProjectStats(project_), project_));
  }
  if (std::regex_match(req.path, match, kExport) && m == "GET") {
    const Project snapshot = Snapshot();
    const std::string kind = match[1];
    if (kind == "coco") {
      return ApiResponse{200, "application/json", ExportCocoText(snapshot)};
    }
    if (kind == "csv") {
      const auto it = req.query.find("kind");
      const std::string csv_kind = it == req.query.end() ? "instances" : it->second;
      if (csv_kind == "instances") {
        return ApiResponse{200, "text/csv", ExportInstancesCsv(snapshot)};
      }
      if (csv_kind == "stats") {
        return ApiResponse{200, "text/csv", ExportProjectStatsCsv(snapshot)};
      }
      throw ApiFailure{MakeError(400, "validation", "kind must be instances or stats")};
    }
  }
  if (std::regex_match(req.path, match, kImage)) {
    const int id = std::stoi(match[1]);
    const std::string sub = match[2];
    if (sub == "/file" && m == "GET") return ImageFile(id);
    if (sub == "/instances" && m == "GET") return JsonResponse(InstancesJson(id));
    if (sub == "/instances" && m == "PUT") {
      return JsonResponse(PutInstances(id, ParseBody(req.body)));
    }
    if (sub == "/prompt" && m == "POST") return JsonResponse(Prompt(id, ParseBody(req.body)));
    if (sub == "/auto" && m == "POST") return JsonResponse(Auto(id, ParseBody(req.body)));
    if (sub == "/stats" && m == "GET") {
      std::shared_lock lock(mu_);
      return JsonResponse(StatsToJson(ImageStats(project_, id), project_));
    }
  }
  throw ApiFailure{MakeError(404, "not_found", "no route for " + m + " " + req.path)};
}

json ProjectService::ProjectSummary() const {
  std::shared_lock lock(mu_);
  int64_t instances = 0;
  int prepared = 0;
  for (const auto& [id, list] : project_.instances) instances += static_cast<int64_t>(list.size());
  for (const ImageEntry& image : project_.images) prepared += image.prepared;
  return json{{"schema_version", project_.schema_version},
              {"image_count", project_.images.size()},
              {"prepared_count", prepared},
              {"label_count", project_.labels.size()},
              {"instance_count", instances},
              {"config",
               {{"min_area_fraction", project_.config.min_area_fraction},
                {"confidence_threshold", project_.config.confidence_threshold}}},
              {"backend", backend_ ? json(backend_name_) : json()}};
}

json ProjectService::ImagesJson() const {
  std::shared_lock lock(mu_);
  json images = json::array();
  for (const ImageEntry& image : project_.images) {
    images.push_back({{"id", image.id},
                      {"path", image.path},
                      {"width", image.width},
                      {"height", image.height},
                      {"prepared", image.prepared},
                      {"site", image.site},
                      {"instance_count", InstancesOf(project_, image.id).size()},
                      {"revision", InstancesRevision(project_, image.id)}});
  }
  return json{{"images", std::move(images)}};
}

json ProjectService::InstancesJson(int image_id) const {
  std::shared_lock lock(mu_);
  json list = json::array();
  for (const LabeledInstance& inst : InstancesOf(project_, image_id)) {
    list.push_back(InstanceJson(inst));
  }
  return json{{"image_id", image_id},
              {"revision", InstancesRevision(project_, image_id)},
              {"instances", std::move(list)}};
}

ApiResponse ProjectService::ImageFile(int image_id) const {
  std::filesystem::path path;
  {
    std::shared_lock lock(mu_);
    path = dir_ / FindImage(project_, image_id).path;
  }
  std::vector<uint8_t> bytes;
  try {
    bytes = ReadFileBytes(path);
  } catch (const Error&) {
    throw ApiFailure{MakeError(404, "not_found", "image file missing: " + path.string())};
  }
  return ApiResponse{200, ContentTypeFor(path), std::string(bytes.begin(), bytes.end())};
}

json ProjectService::PutInstances(int image_id, const json& body) {
  if (!body.contains("instances") || !body.at("instances").is_array()) {
    throw ApiFailure{MakeError(400, "validation", "\"instances\" must be an array")};
  }
  Mutate([&](Project& p) {
    CheckRevision(p, image_id, body);
    const ImageEntry& image = FindImage(p, image_id);
    std::set<int64_t> keep;
    for (const json& entry : body.at("instances")) {
      if (!entry.is_object()) {
        throw ApiFailure{MakeError(400, "validation", "instance entries must be objects")};
      }
      if (entry.contains("instance_id")) {
        const int64_t id = Field<int64_t>(entry, "instance_id");
        if (!keep.insert(id).second) {
          throw ApiFailure{MakeError(400, "validation",
                                     "instance " + std::to_string(id) + " listed twice")};
        }
        FindInstance(p, image_id, id);
      }
    }
    std::vector<int64_t> removed;
    for (const LabeledInstance& inst : InstancesOf(p, image_id)) {
      if (!keep.contains(inst.instance_id)) removed.push_back(inst.instance_id);
    }
    for (int64_t id : removed) RemoveInstance(p, image_id, id);

    for (const json& entry : body.at("instances")) {
      int64_t id;
      if (entry.contains("instance_id")) {
        id = Field<int64_t>(entry, "instance_id");
        if (entry.contains("mask") &&
            MaskFromJson(entry.at("mask")) != FindInstance(p, image_id, id).mask) {
          throw ApiFailure{MakeError(400, "validation",
                                     "masks of existing instances are immutable; "
                                     "remove and add instead")};
        }
      } else {
        if (!entry.contains("mask")) {
          throw ApiFailure{MakeError(400, "validation", "new instances need a mask")};
        }
        BinaryMask mask = MaskFromJson(entry.at("mask"));
        if (mask.width() != image.width || mask.height() != image.height) {
          throw Error(ErrorCode::kDimension, "mask does not match image size");
        }
        const InstanceSource source =
            ParseSource(FieldOr<std::string>(entry, "source", "manual"));
        id = AddInstance(p, image_id, std::move(mask), source,
                         FieldOr<double>(entry, "confidence", 1.0));
      }
      if (entry.contains("label_id")) {
        if (entry.at("label_id").is_null()) {
          ClearLabel(p, image_id, id);
        } else {
          // A dangling label reference is a bad request body, not a missing
          // resource.
          const int label_id = Field<int>(entry, "label_id");
          if (std::none_of(p.labels.begin(), p.labels.end(),
                           [&](const Label& l) { return l.id == label_id; })) {
            throw ApiFailure{MakeError(400, "validation",
                                       "unknown label " + std::to_string(label_id))};
          }
          AssignLabel(p, image_id, id, label_id);
        }
      }
      if (entry.contains("health")) {
        AssignHealth(p, image_id, id, ParseHealth(Field<std::string>(entry, "health")));
      }
    }
    return 0;
  });
  return InstancesJson(image_id);
}

SegmentationBackend& ProjectService::RequireBackend() const {
  if (!backend_) {
    throw Error(ErrorCode::kBackendUnavailable, "service runs without a backend");
  }
  return *backend_;
}

std::mutex& ProjectService::ImageLock(int image_id) {
  std::lock_guard lock(image_locks_mu_);
  auto& slot = image_locks_[image_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

ImageRef ProjectService::EnsurePrepared(int image_id) {
  SegmentationBackend& backend = RequireBackend();
  ImageRef ref;
  bool flagged;
  {
    std::shared_lock lock(mu_);
    ref = ImageRefFor(project_, image_id, dir_);
    flagged = FindImage(project_, image_id).prepared;
  }
  if (!backend.IsPrepared(image_id)) backend.Prepare(ref);
  if (!flagged) {
    Mutate([&](Project& p) {
      MarkPrepared(p, image_id);
      return 0;
    });
  }
  return ref;
}

json ProjectService::Prompt(int image_id, const json& body) {
  if (!body.contains("points") || !body.at("points").is_array()) {
    throw ApiFailure{MakeError(400, "validation", "\"points\" must be an array")};
  }
  std::vector<PointPrompt> prompts;
  for (const json& pt : body.at("points")) {
    if (!pt.is_object()) throw ApiFailure{MakeError(400, "validation", "bad point")};
    const std::string polarity = FieldOr<std::string>(pt, "polarity", "positive");
    if (polarity != "positive" && polarity != "negative") {
      throw ApiFailure{MakeError(400, "validation", "polarity must be positive or negative")};
    }
    prompts.push_back({Field<int>(pt, "x"), Field<int>(pt, "y"),
                       polarity == "positive" ? Polarity::kPositive : Polarity::kNegative});
  }
  std::lock_guard image_lock(ImageLock(image_id));
  const ImageRef ref = EnsurePrepared(image_id);
  json out = ProposalJson(PromptToMask(*backend_, ref, prompts));
  out["image_id"] = image_id;
  return out;
}

json ProjectService::Auto(int image_id, const json& body) {
  ProjectConfig config;
  {
    std::shared_lock lock(mu_);
    config = project_.config;
  }
  const double min_area = FieldOr<double>(body, "min_area_fraction", config.min_area_fraction);
  const double threshold =
      FieldOr<double>(body, "confidence_threshold", config.confidence_threshold);
  const bool commit = FieldOr<bool>(body, "commit", false);
  if (commit) Field<std::string>(body, "revision");

  std::vector<MaskProposal> proposals;
  {
    std::lock_guard image_lock(ImageLock(image_id));
    const ImageRef ref = EnsurePrepared(image_id);
    proposals = AutoSegment(*backend_, ref, min_area, threshold);
  }
  json out{{"image_id", image_id}, {"proposals", json::array()}};
  for (const MaskProposal& p : proposals) out["proposals"].push_back(ProposalJson(p));
  if (commit) {
    const json ids = Mutate([&](Project& p) {
      CheckRevision(p, image_id, body);
      json added = json::array();
      for (const MaskProposal& prop : proposals) {
        added.push_back(AddInstance(p, image_id, prop.mask, InstanceSource::kAuto,
                                    prop.confidence));
      }
      return added;
    });
    out["committed"] = ids;
  }
  std::shared_lock lock(mu_);
  out["revision"] = InstancesRevision(project_, image_id);
  return out;
}

json ProjectService::PutLabels(const json& body) {
  if (!body.contains("labels") || !body.at("labels").is_array()) {
    throw ApiFailure{MakeError(400, "validation", "\"labels\" must be an array")};
  }
  std::vector<Label> labels;
  for (const json& l : body.at("labels")) {
    if (!l.is_object()) throw ApiFailure{MakeError(400, "validation", "bad label")};
    labels.push_back({Field<int>(l, "id"), Field<std::string>(l, "name"),
                      Field<std::string>(l, "color")});
  }
  Mutate([&](Project& p) {
    DefineLabels(p, labels);
    return 0;
  });
  std::shared_lock lock(mu_);
  return json{{"labels", LabelsJson(project_)}};
}

}  // namespace coralab
