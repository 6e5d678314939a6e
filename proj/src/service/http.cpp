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
#include <csignal>
#include <functional>
#include <mutex>
#include <pthread.h>
#include <thread>

#include "coralab/service.h"
#include "httplib.h"

namespace coralab {
namespace {

std::mutex g_server_mu;
httplib::Server* g_server = nullptr;

void Forward(ProjectService& service, const httplib::Request& req,
             httplib::Response& res) {
  ApiRequest api{req.method, req.path, {}, req.body};
  for (const auto& [k, v] : req.params) api.query[k] = v;
  const ApiResponse out = service.Handle(api);
  res.status = out.status;
  res.set_content(out.body, out.content_type);
}

}  // namespace

void StopServing() {
  std::lock_guard lock(g_server_mu);
  if (g_server) g_server->stop();
}

void Serve(ProjectService& service, const ServeOptions& options,
           const std::function<void(int port)>& on_listen, bool handle_signals) {
  httplib::Server server;
  // httplib defaults to SO_REUSEPORT, which would let a second server share
  // a port that is already serving another project.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    Forward(service, req, res);
  };
  server.Get(R"(/api/.*)", handler);
  server.Put(R"(/api/.*)", handler);
  server.Post(R"(/api/.*)", handler);
  if (!options.static_dir.empty() &&
      !server.set_mount_point("/", options.static_dir.string())) {
    throw Error(ErrorCode::kIo, "cannot serve " + options.static_dir.string());
  }

  int port = options.port;
  if (port == 0) {
    port = server.bind_to_any_port(options.host);
  } else if (!server.bind_to_port(options.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + options.host + ":" +
                                    std::to_string(options.port));
  }
  {
    std::lock_guard lock(g_server_mu);
    g_server = &server;
  }

  // Signals are taken synchronously by a watcher thread rather than in an
  // async handler, so stop() never runs in signal context.
  std::thread watcher;
  sigset_t signals;
  if (handle_signals) {
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    sigaddset(&signals, SIGUSR1);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    watcher = std::thread([&signals, &server] {
      int sig = 0;
      sigwait(&signals, &sig);
      server.stop();
    });
  }
  if (on_listen) on_listen(port);
  server.listen_after_bind();
  {
    std::lock_guard lock(g_server_mu);
    g_server = nullptr;
  }
  if (watcher.joinable()) {
    // Wake the watcher if the server stopped for another reason.
    pthread_kill(watcher.native_handle(), SIGUSR1);
    watcher.join();
  }
}

}  // namespace coralab
