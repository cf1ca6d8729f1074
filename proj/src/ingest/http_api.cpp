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

#include "mobiscout/ingest/http_api.hpp"

#include <charconv>

#include "mobiscout/model/serialize.hpp"

namespace mobiscout::ingest {

using httplib::Request;
using httplib::Response;
using http::send_error;
using http::send_json;
using nlohmann::json;

json offset_json(const ServerUpload& u) {
  json confirmed = json::array();
  for (const auto& c : u.confirmed)
    confirmed.push_back({{"stream", model::stream_name(c.stream)},
                         {"index", c.index},
                         {"digest", c.digest},
                         {"byteLength", c.byte_length}});
  json j{{"uploadId", u.upload_id},
         {"sessionId", u.session_id},
         {"state", upload_state_name(u.state)},
         {"confirmed", std::move(confirmed)},
         {"confirmedBytes", u.confirmed_bytes()},
         {"totalBytes", u.manifest.total_bytes()}};
  if (u.report) j["report"] = *u.report;
  return j;
}

json series_json(const Series& s) {
  json points = json::array();
  for (const auto& p : s.points) {
    json point{{"t", p.t}};
    for (const auto& [name, value] : p.fields) {
      if (name == "t") continue;
      point[name] = value;
      if (name == s.field) point["value"] = value;
    }
    points.push_back(std::move(point));
  }
  return {{"sessionId", s.session_id},
          {"stream", model::stream_name(s.stream)},
          {"field", s.field},
          {"sourceCount", s.source_count},
          {"points", std::move(points)}};
}

json notification_json(const Notification& n) {
  return {{"id", n.id},
          {"createdAt", n.created_at},
          {"uploadId", n.upload_id},
          {"sessionId", n.session_id},
          {"kind", n.kind},
          {"report", n.report}};
}

namespace {

// Rejects bad tokens before the body is looked at.
std::string bearer(IngestionService& service, const Request& req) {
  const std::string header = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  if (header.size() <= kPrefix.size() || header.compare(0, kPrefix.size(), kPrefix) != 0)
    throw Error(Errc::kUnauthenticated, "missing bearer token");
  std::string token = header.substr(kPrefix.size());
  service.accounts().authenticate(token);
  return token;
}

model::Stream stream_param(const std::string& name) {
  const auto s = model::parse_stream(name);
  if (!s) throw Error(Errc::kNotFound, "unknown stream '" + name + "'");
  return *s;
}

int64_t int_param(const std::string& text, const char* what) {
  int64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size())
    throw Error(Errc::kInvalidArgument, std::string("bad ") + what + " '" + text + "'");
  return v;
}

std::string text_field(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || !it->is_string())
    throw Error(Errc::kInvalidArgument, std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

// Runs a handler, translating ValidationFailed into its 422 body.
template <typename Fn>
auto guarded(Fn fn) {
  return [fn](const Request& req, Response& res) {
    try {
      fn(req, res);
    } catch (const ValidationFailed& e) {
      send_error(res, e, {{"uploadId", e.upload_id()}, {"report", e.report()}});
    } catch (const Error& e) {
      send_error(res, e);
    }
  };
}

}  // namespace

void mount_ingestion_api(httplib::Server& server, IngestionService& service,
                         const std::filesystem::path& console_dir) {
  if (!console_dir.empty() && std::filesystem::is_directory(console_dir))
    server.set_mount_point("/console", console_dir.string());

  server.Post("/v1/register", guarded([&](const Request& req, Response& res) {
    const json body = http::parse_body(req);
    const Account a =
        service.accounts().register_account(text_field(body, "email"), text_field(body, "password"));
    send_json(res, {{"userId", a.user_id}, {"email", a.email}, {"state", "pending"}}, 201);
  }));

  server.Post("/v1/confirm", guarded([&](const Request& req, Response& res) {
    const json body = http::parse_body(req);
    const Account a = service.accounts().confirm(text_field(body, "email"), text_field(body, "code"));
    send_json(res, {{"userId", a.user_id}, {"email", a.email}, {"state", "active"}});
  }));

  server.Post("/v1/login", guarded([&](const Request& req, Response& res) {
    const json body = http::parse_body(req);
    const Session s = service.accounts().login(text_field(body, "email"), text_field(body, "password"));
    send_json(res, {{"token", s.token}, {"userId", s.user_id}, {"expiresAt", s.expires_at}});
  }));

  server.Get("/v1/consent", guarded([&](const Request& req, Response& res) {
    send_json(res, service.get_consent(bearer(service, req)));
  }));

  server.Put("/v1/consent", guarded([&](const Request& req, Response& res) {
    const std::string token = bearer(service, req);
    const auto profile = http::parse_body(req).get<model::ConsentProfile>();
    send_json(res, service.set_consent(token, profile));
  }));

  server.Post("/v1/uploads", guarded([&](const Request& req, Response& res) {
    const std::string token = bearer(service, req);
    auto manifest = http::parse_body(req).get<model::SessionManifest>();
    send_json(res, offset_json(service.create_upload(token, std::move(manifest))), 201);
  }));

  server.Put(R"(/v1/uploads/([^/]+)/chunks/([^/]+)/([0-9]+))",
             guarded([&](const Request& req, Response& res) {
               const std::string token = bearer(service, req);
               const auto index = int_param(req.matches[3], "index");
               if (index < 0 || index > UINT32_MAX)
                 throw Error(Errc::kInvalidArgument, "chunk index out of range");
               const std::string digest = req.get_header_value(kDigestHeader);
               if (digest.empty())
                 throw Error(Errc::kDigestMismatch, std::string(kDigestHeader) + " header missing");
               const uint64_t confirmed =
                   service.put_chunk(token, req.matches[1], stream_param(req.matches[2]),
                                     static_cast<uint32_t>(index), req.body, digest);
               send_json(res, {{"confirmed", confirmed}});
             }));

  server.Get(R"(/v1/uploads/([^/]+)/offset)", guarded([&](const Request& req, Response& res) {
    send_json(res, offset_json(service.get_offset(bearer(service, req), req.matches[1])));
  }));

  server.Post(R"(/v1/uploads/([^/]+)/complete)", guarded([&](const Request& req, Response& res) {
    const auto report = service.complete(bearer(service, req), req.matches[1]);
    send_json(res, {{"uploadId", std::string(req.matches[1])}, {"state", "complete"}, {"report", report}});
  }));

  server.Delete(R"(/v1/uploads/([^/]+))", guarded([&](const Request& req, Response& res) {
    service.abort(bearer(service, req), req.matches[1]);
    res.status = 204;
  }));

  server.Get("/v1/sessions", guarded([&](const Request& req, Response& res) {
    send_json(res, service.list_sessions(bearer(service, req)));
  }));

  server.Get(R"(/v1/sessions/([^/]+)/series/([^/]+))", guarded([&](const Request& req, Response& res) {
    const std::string token = bearer(service, req);
    const auto stream = stream_param(req.matches[2]);
    int64_t points = 1000;
    if (req.has_param("points")) points = int_param(req.get_param_value("points"), "points");
    if (points < 1) throw Error(Errc::kInvalidArgument, "points must be >= 1");
    std::optional<int> pid;
    if (req.has_param("pid")) pid = static_cast<int>(int_param(req.get_param_value("pid"), "pid"));
    const auto series = service.get_series(token, req.matches[1], stream, static_cast<size_t>(points),
                                           req.get_param_value("field"), pid);
    send_json(res, series_json(series));
  }));

  server.Get("/v1/notifications", guarded([&](const Request& req, Response& res) {
    json list = json::array();
    for (const auto& n : service.notifications(bearer(service, req))) list.push_back(notification_json(n));
    send_json(res, list);
  }));
}

}  // namespace mobiscout::ingest
