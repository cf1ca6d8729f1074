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

#include "mobiscout/app/control_api.hpp"

#include <chrono>
#include <thread>

#include "mobiscout/model/serialize.hpp"

namespace mobiscout::app {

using httplib::Request;
using httplib::Response;
using http::send_json;
using nlohmann::json;

namespace {

json stamped(const std::optional<recorder::Timestamped>& v) {
  if (!v) return nullptr;
  return {{"value", v->value}, {"t", v->t}};
}

json body_or_empty(const Request& req) {
  if (req.body.empty()) return json::object();
  json j = http::parse_body(req);
  if (!j.is_object()) throw Error(Errc::kMalformed, "expected a JSON object");
  return j;
}

std::vector<model::Stream> streams_from(const json& body) {
  std::vector<model::Stream> out;
  for (const auto& name : body.value("streams", json::array())) {
    const auto s = model::parse_stream(name.get<std::string>());
    if (!s) throw Error(Errc::kInvalidArgument, "unknown stream " + name.dump());
    out.push_back(*s);
  }
  return out;
}

json task_json(const sync::UploadTask& t) {
  json j = t;
  j.erase("confirmed");
  return j;
}

}  // namespace

json live_status_json(const recorder::LiveStatus& s) {
  return {{"recording", s.recording},
          {"sessionId", s.session_id ? json(*s.session_id) : json(nullptr)},
          {"heartRate", stamped(s.heart_rate)},
          {"vehicleSpeed", stamped(s.vehicle_speed)},
          {"accelerationZ", stamped(s.acceleration_z)},
          {"obdState", s.obd_state},
          {"elapsedMs", s.elapsed_ms ? json(*s.elapsed_ms) : json(nullptr)},
          {"warnings", s.warnings}};
}

void mount_control_api(httplib::Server& server, Agent& agent) {
  server.Post("/control/record/start", [&](const Request& req, Response& res) {
    const json body = body_or_empty(req);
    std::optional<model::UserSettings> settings;
    std::optional<model::ConsentProfile> consent;
    if (body.contains("settings")) settings = body["settings"].get<model::UserSettings>();
    if (body.contains("consent")) consent = body["consent"].get<model::ConsentProfile>();
    const auto started = agent.start_recording(settings, consent, streams_from(body));
    send_json(res, {{"sessionId", started.session_id}, {"warnings", started.warnings}}, 201);
  });

  server.Post("/control/record/stop", [&](const Request&, Response& res) {
    send_json(res, agent.stop_recording());
  });

  server.Get("/control/status", [&](const Request&, Response& res) {
    send_json(res, live_status_json(agent.recorder().live_status()));
  });

  // Server-sent events, one status frame every 500 ms.
  server.Get("/control/status/events", [&](const Request&, Response& res) {
    res.set_chunked_content_provider("text/event-stream", [&](size_t, httplib::DataSink& sink) {
      const std::string frame = "data: " + live_status_json(agent.recorder().live_status()).dump() + "\n\n";
      if (!sink.write(frame.data(), frame.size())) return false;
      std::this_thread::sleep_for(std::chrono::milliseconds(500));
      return sink.is_writable();
    });
  });

  server.Get("/control/sessions", [&](const Request&, Response& res) {
    send_json(res, agent.library().list());
  });

  server.Get(R"(/control/sessions/([^/]+))", [&](const Request& req, Response& res) {
    send_json(res, agent.library().load(req.matches[1]));
  });

  server.Delete(R"(/control/sessions/([^/]+))", [&](const Request& req, Response& res) {
    agent.library().remove(req.matches[1]);
    res.status = 204;
  });

  server.Post(R"(/control/sessions/([^/]+)/upload)", [&](const Request& req, Response& res) {
    const json body = body_or_empty(req);
    const auto mode = sync::parse_upload_mode(body.value("mode", "deferred"));
    if (!mode) throw Error(Errc::kInvalidArgument, "mode must be live or deferred");
    send_json(res, task_json(agent.sync().enqueue(req.matches[1], *mode)), 202);
  });

  server.Get("/control/settings", [&](const Request&, Response& res) { send_json(res, agent.settings()); });

  server.Put("/control/settings", [&](const Request& req, Response& res) {
    send_json(res, agent.set_settings(http::parse_body(req).get<model::UserSettings>()));
  });

  server.Get("/control/consent", [&](const Request&, Response& res) { send_json(res, agent.consent()); });

  server.Put("/control/consent", [&](const Request& req, Response& res) {
    send_json(res, agent.set_consent(http::parse_body(req).get<model::ConsentProfile>()));
  });

  server.Get("/control/uploads", [&](const Request&, Response& res) {
    json list = json::array();
    for (const auto& t : agent.sync().tasks()) list.push_back(task_json(t));
    send_json(res, list);
  });

  server.Get(R"(/control/uploads/([^/]+))", [&](const Request& req, Response& res) {
    send_json(res, task_json(agent.sync().task(req.matches[1])));
  });

  server.Post(R"(/control/uploads/([^/]+)/(pause|resume|cancel))", [&](const Request& req, Response& res) {
    const std::string id = req.matches[1];
    const std::string op = req.matches[2];
    auto& engine = agent.sync();
    const auto t = op == "pause" ? engine.pause(id) : op == "resume" ? engine.resume(id) : engine.cancel(id);
    send_json(res, task_json(t));
  });

  server.Get("/control/connectivity", [&](const Request&, Response& res) {
    send_json(res, {{"online", agent.online()}});
  });

  server.Put("/control/connectivity", [&](const Request& req, Response& res) {
    const json body = http::parse_body(req);
    agent.set_online(body.at("online").get<bool>());
    send_json(res, {{"online", agent.online()}});
  });
}

}  // namespace mobiscout::app
