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
#include "coralab/subprocess_backend.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "coralab/error.h"
#include "coralab/rle_json.h"

namespace coralab {

using nlohmann::json;

SubprocessBackend::SubprocessBackend(std::string command,
                                     std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {}

SubprocessBackend::~SubprocessBackend() {
  std::lock_guard lock(mutex_);
  StopLocked();
}

void SubprocessBackend::StartLocked() {
  if (pid_ > 0) return;
  // A dead adapter must surface as an error, not a signal.
  ::signal(SIGPIPE, SIG_IGN);
  int in_pipe[2], out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    throw Error(ErrorCode::kBackendUnavailable, "pipe failed");
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw Error(ErrorCode::kBackendUnavailable, "pipe failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw Error(ErrorCode::kBackendUnavailable, "fork failed");
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
}

void SubprocessBackend::StopLocked() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    if (::waitpid(pid_, &status, WNOHANG) == 0) {
      ::kill(pid_, SIGTERM);
      ::waitpid(pid_, &status, 0);
    }
  }
  pid_ = -1;
  prepared_.clear();
}

std::string SubprocessBackend::ReadLineLocked() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  while (true) {
    const size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      StopLocked();
      throw Error(ErrorCode::kBackendUnavailable, "backend timed out");
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) continue;
    char chunk[65536];
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      StopLocked();
      throw Error(ErrorCode::kBackendUnavailable,
                  "backend process exited: " + command_);
    }
    buffer_.append(chunk, static_cast<size_t>(n));
  }
}

json SubprocessBackend::MakeRequest(int64_t id, std::string_view op,
                                    const ImageRef& image, json params) {
  return json{{"id", id},
              {"op", op},
              {"image_id", image.image_id},
              {"image_path", image.path.string()},
              {"params", std::move(params)}};
}

std::vector<MaskProposal> SubprocessBackend::ParseMasks(const json& response,
                                                        const ImageRef& image) {
  if (!response.is_object() || !response.contains("ok") ||
      !response.at("ok").is_boolean()) {
    throw Error(ErrorCode::kBackendFailure, "malformed backend response");
  }
  if (!response.at("ok").get<bool>()) {
    throw Error(ErrorCode::kBackendFailure,
                "backend error: " + response.value("error", std::string("?")));
  }
  std::vector<MaskProposal> out;
  if (!response.contains("masks")) return out;
  if (!response.at("masks").is_array()) {
    throw Error(ErrorCode::kBackendFailure, "backend masks must be an array");
  }
  for (const json& m : response.at("masks")) {
    try {
      MaskProposal p{MaskFromJson(m), m.at("confidence").get<double>()};
      if (p.mask.width() != image.width || p.mask.height() != image.height) {
        throw Error(ErrorCode::kBackendFailure, "mask size mismatch");
      }
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kBackendFailure,
                  std::string("malformed backend mask: ") + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kBackendFailure,
                  std::string("malformed backend mask: ") + e.what());
    }
  }
  return out;
}

json SubprocessBackend::Call(std::string_view op, const ImageRef& image,
                             json params) {
  std::unique_lock lock(mutex_);
  StartLocked();
  const int64_t id = next_id_++;
  const std::string line = MakeRequest(id, op, image, std::move(params)).dump() + "\n";
  size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(to_child_, line.data() + written, line.size() - written);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      StopLocked();
      throw Error(ErrorCode::kBackendUnavailable,
                  "cannot write to backend process: " + command_);
    }
    written += static_cast<size_t>(n);
  }
  while (true) {
    const std::string reply = ReadLineLocked();
    json response;
    try {
      response = json::parse(reply);
    } catch (const json::exception&) {
      throw Error(ErrorCode::kBackendFailure, "backend sent invalid JSON");
    }
    if (response.is_object() && response.contains("id") &&
        response.at("id").is_number_integer() &&
        response.at("id").get<int64_t>() == id) {
      return response;
    }
  }
}

PreparationReceipt SubprocessBackend::Prepare(const ImageRef& image) {
  {
    std::lock_guard lock(mutex_);
    if (prepared_.contains(image.image_id)) return {image.image_id, true};
  }
  ParseMasks(Call("prepare", image,
                  {{"width", image.width}, {"height", image.height}}),
             image);
  std::lock_guard lock(mutex_);
  prepared_.insert(image.image_id);
  return {image.image_id, false};
}

bool SubprocessBackend::IsPrepared(int image_id) const {
  std::lock_guard lock(mutex_);
  return prepared_.contains(image_id);
}

std::vector<MaskProposal> SubprocessBackend::Propose(
    const ImageRef& image, const AutoSegmentParams& params) {
  return ParseMasks(Call("auto", image,
                         {{"min_area_fraction", params.min_area_fraction},
                          {"confidence_threshold", params.confidence_threshold}}),
                    image);
}

MaskProposal SubprocessBackend::Prompt(const ImageRef& image,
                                       std::span<const PointPrompt> prompts) {
  json points = json::array();
  for (const PointPrompt& p : prompts) {
    points.push_back({{"x", p.x},
                      {"y", p.y},
                      {"polarity", p.polarity == Polarity::kPositive
                                       ? "positive"
                                       : "negative"}});
  }
  auto masks = ParseMasks(Call("prompt", image, {{"points", std::move(points)}}),
                          image);
  if (masks.empty()) {
    return MaskProposal{BinaryMask::Empty(image.width, image.height), 0.0};
  }
  return std::move(masks.front());
}

}  // namespace coralab
