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
#ifndef CORALAB_SUBPROCESS_BACKEND_H_
#define CORALAB_SUBPROCESS_BACKEND_H_

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <mutex>
#include <set>
#include <string>

#include "coralab/backend.h"
#include "json.hpp"

namespace coralab {

// Talks to an external model process over newline-delimited JSON on its
// stdin/stdout:
//   request:  {"id":n,"op":"prepare"|"auto"|"prompt","image_id":k,
//              "image_path":"...","params":{...}}
//   response: {"id":n,"ok":true,"masks":[{"size":[H,W],"counts":[...],
//              "confidence":c}]}  or  {"id":n,"ok":false,"error":"..."}
// The process is started on first use. Requests are serialized; responses
// whose id does not match the outstanding request are discarded.
class SubprocessBackend : public SegmentationBackend {
 public:
  explicit SubprocessBackend(
      std::string command,
      std::chrono::milliseconds timeout = std::chrono::seconds(120));
  ~SubprocessBackend() override;

  SubprocessBackend(const SubprocessBackend&) = delete;
  SubprocessBackend& operator=(const SubprocessBackend&) = delete;

  PreparationReceipt Prepare(const ImageRef& image) override;
  bool IsPrepared(int image_id) const override;
  std::vector<MaskProposal> Propose(const ImageRef& image,
                                    const AutoSegmentParams& params) override;
  MaskProposal Prompt(const ImageRef& image,
                      std::span<const PointPrompt> prompts) override;

  // Builds the JSON request line (without the trailing newline).
  static nlohmann::json MakeRequest(int64_t id, std::string_view op,
                                    const ImageRef& image,
                                    nlohmann::json params);
  // Validates a response and extracts its masks. Throws kBackendFailure.
  static std::vector<MaskProposal> ParseMasks(const nlohmann::json& response,
                                              const ImageRef& image);

 private:
  nlohmann::json Call(std::string_view op, const ImageRef& image,
                      nlohmann::json params);
  void StartLocked();
  void StopLocked();
  std::string ReadLineLocked();

  std::string command_;
  std::chrono::milliseconds timeout_;
  mutable std::mutex mutex_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  int64_t next_id_ = 1;
  std::set<int> prepared_;
};

}  // namespace coralab

#endif  // CORALAB_SUBPROCESS_BACKEND_H_
