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
#ifndef CORALAB_SERVICE_H_
#define CORALAB_SERVICE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "coralab/backend.h"
#include "coralab/error.h"
#include "coralab/project.h"
#include "json.hpp"

namespace coralab {

// Error payload of the HTTP API: {"error":{"code","message","details"}}.
// Codes: not_found 404, validation 400, conflict 409, version 400,
// backend_unavailable 503 and, for persistence failures, internal 500.
struct ApiError {
  int status = 500;
  std::string code;
  std::string message;
  nlohmann::json details = nullptr;

  nlohmann::json ToJson() const;
};

ApiError ApiErrorFor(const Error& error);

struct ApiRequest {
  std::string method;  // GET, PUT, POST
  std::string path;    // e.g. /api/images/1/instances
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Revision token of one image's instance list: FNV-1a of its serialized
// instances and next creation index, as 16 hex digits. Equal persisted
// state gives equal tokens.
std::string InstancesRevision(const Project& project, int image_id);

// Owns a project file and serves the HTTP API over it. Reads run
// concurrently on the in-memory copy, which always equals the file.
// Mutations are serialized: copy, apply, validate, save, then publish, so a
// failure at any step leaves both the file and the served state unchanged.
// Backend calls never hold the project lock.
class ProjectService {
 public:
  // `backend` may be null; prompt and auto then answer backend_unavailable.
  ProjectService(std::filesystem::path project_path,
                 std::shared_ptr<SegmentationBackend> backend,
                 std::string backend_name = "");

  ApiResponse Handle(const ApiRequest& request);

  Project Snapshot() const;

 private:
  template <typename Fn>
  auto Mutate(Fn&& fn);

  ApiResponse Route(const ApiRequest& request);
  nlohmann::json ProjectSummary() const;
  nlohmann::json ImagesJson() const;
  nlohmann::json InstancesJson(int image_id) const;
  ApiResponse ImageFile(int image_id) const;
  nlohmann::json PutInstances(int image_id, const nlohmann::json& body);
  nlohmann::json Prompt(int image_id, const nlohmann::json& body);
  nlohmann::json Auto(int image_id, const nlohmann::json& body);
  nlohmann::json PutLabels(const nlohmann::json& body);
  SegmentationBackend& RequireBackend() const;
  // Prepares through the backend if needed and records the flag.
  ImageRef EnsurePrepared(int image_id);
  std::mutex& ImageLock(int image_id);

  std::filesystem::path path_;
  std::filesystem::path dir_;
  std::shared_ptr<SegmentationBackend> backend_;
  std::string backend_name_;

  mutable std::shared_mutex mu_;
  Project project_;

  std::mutex image_locks_mu_;
  std::map<int, std::unique_ptr<std::mutex>> image_locks_;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;                     // 0 picks a free port
  std::filesystem::path static_dir;    // optional UI bundle served at /
};

// Blocks until StopServing is called or SIGINT/SIGTERM arrives when
// `handle_signals` is set. `on_listen` receives the bound port.
// Throws kIo when the port cannot be bound.
void Serve(ProjectService& service, const ServeOptions& options,
           const std::function<void(int port)>& on_listen = {},
           bool handle_signals = false);
void StopServing();

}  // namespace coralab

#endif  // CORALAB_SERVICE_H_
