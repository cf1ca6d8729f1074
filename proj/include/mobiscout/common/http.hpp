// Copyright 2026 The MobiScout Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Shared plumbing for the JSON-over-HTTP surfaces.

#include <httplib.h>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

#include <json.hpp>
#include "mobiscout/common/error.hpp"

namespace mobiscout::http {

inline constexpr size_t kMaxPayloadBytes = 64u << 20;

int status_for(Errc code) noexcept;
std::optional<Errc> parse_errc(std::string_view name) noexcept;

void send_json(httplib::Response& res, const nlohmann::json& body, int status = 200);
// Body is {"error": CODE, "message": text} merged with `extra`.
void send_error(httplib::Response& res, const Error& e, const nlohmann::json& extra = {});
// Throws kMalformed when the body is not a JSON document.
nlohmann::json parse_body(const httplib::Request& req);

// Rebuilds the Error carried by a JSON error response; falls back to kNetwork.
Error error_from_response(int status, const std::string& body);

struct HostPort {
  std::string host;
  int port = 0;
  // Accepts "host:port", ":port" and "port".
  static HostPort parse(std::string_view text);
  std::string str() const { return host + ":" + std::to_string(port); }
};

// httplib server bound up front and served from a background thread.
// Permissive CORS headers are added to every response.
class BackgroundServer {
 public:
  BackgroundServer();
  ~BackgroundServer();
  BackgroundServer(const BackgroundServer&) = delete;
  BackgroundServer& operator=(const BackgroundServer&) = delete;

  httplib::Server& routes() { return *server_; }
  // Port 0 picks an ephemeral port. Throws kBindFailure.
  int bind(const std::string& host, int port);
  void start();
  // Serves on the calling thread until stop().
  void run();
  void stop();
  int port() const { return port_; }

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace mobiscout::http
