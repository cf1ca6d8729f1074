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

#include "mobiscout/common/http.hpp"

#include <charconv>

namespace mobiscout::http {

using nlohmann::json;

int status_for(Errc code) noexcept {
  switch (code) {
    case Errc::kUnauthenticated:
    case Errc::kBadCredentials: return 401;
    case Errc::kForbidden:
    case Errc::kNotConfirmed:
    case Errc::kConsentDenied: return 403;
    case Errc::kNotFound:
    case Errc::kUnknownUpload:
    case Errc::kGone: return 404;
    case Errc::kEmailTaken:
    case Errc::kInvalidState:
    case Errc::kInvalidTransition:
    case Errc::kAlreadyRecording:
    case Errc::kNotRecording:
    case Errc::kSessionActive: return 409;
    case Errc::kValidationFailed: return 422;
    case Errc::kInvalidArgument:
    case Errc::kMalformed:
    case Errc::kOutOfRange:
    case Errc::kBadCode:
    case Errc::kExpiredCode:
    case Errc::kDigestMismatch:
    case Errc::kChunkNotInManifest: return 400;
    case Errc::kDiskFull: return 507;
    case Errc::kNetwork:
    case Errc::kObdUnavailable: return 503;
    default: return 500;
  }
}

std::optional<Errc> parse_errc(std::string_view name) noexcept {
  for (int i = 0; i <= static_cast<int>(Errc::kBindFailure); ++i)
    if (errc_name(static_cast<Errc>(i)) == name) return static_cast<Errc>(i);
  return std::nullopt;
}

void send_json(httplib::Response& res, const json& body, int status) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e, const json& extra) {
  json body{{"error", e.code_name()}, {"message", e.what()}};
  if (extra.is_object()) body.update(extra);
  send_json(res, body, status_for(e.code()));
}

json parse_body(const httplib::Request& req) {
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::kMalformed, "request body is not JSON");
  return j;
}

Error error_from_response(int status, const std::string& body) {
  const json j = json::parse(body, nullptr, false);
  if (j.is_object() && j.contains("error") && j["error"].is_string()) {
    if (auto code = parse_errc(j["error"].get<std::string>()))
      return Error(*code, j.value("message", std::string(errc_name(*code))));
  }
  return Error(Errc::kNetwork, "HTTP " + std::to_string(status));
}

HostPort HostPort::parse(std::string_view text) {
  HostPort hp{"127.0.0.1", 0};
  std::string_view port = text;
  if (const auto colon = text.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) hp.host = std::string(text.substr(0, colon));
    port = text.substr(colon + 1);
  }
  const auto [end, ec] = std::from_chars(port.data(), port.data() + port.size(), hp.port);
  if (ec != std::errc() || end != port.data() + port.size() || hp.port < 0 || hp.port > 65535)
    throw Error(Errc::kInvalidArgument, "bad address '" + std::string(text) + "'");
  return hp;
}

BackgroundServer::BackgroundServer() : server_(std::make_unique<httplib::Server>()) {
  server_->set_payload_max_length(kMaxPayloadBytes);
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers",
                                 "Authorization, Content-Type, X-Content-Digest"},
                                {"Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS"}});
  server_->Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server_->set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
          std::rethrow_exception(ep);
        } catch (const Error& e) {
          send_error(res, e);
        } catch (const nlohmann::json::exception& e) {
          send_error(res, Error(Errc::kMalformed, e.what()));
        } catch (const std::exception& e) {
          send_json(res, {{"error", "INTERNAL"}, {"message", e.what()}}, 500);
        }
      });
}

BackgroundServer::~BackgroundServer() { stop(); }

int BackgroundServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
    if (port_ <= 0) throw Error(Errc::kBindFailure, "cannot bind " + host);
  } else {
    if (!server_->bind_to_port(host, port))
      throw Error(Errc::kBindFailure, "cannot bind " + host + ":" + std::to_string(port));
    port_ = port;
  }
  return port_;
}

void BackgroundServer::start() {
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void BackgroundServer::run() { server_->listen_after_bind(); }

void BackgroundServer::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace mobiscout::http
