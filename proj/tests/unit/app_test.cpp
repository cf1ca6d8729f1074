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

#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>

#include <httplib.h>

#include "accounts.hpp"
#include "mobiscout/app/agent.hpp"
#include "mobiscout/app/control_api.hpp"
#include "mobiscout/app/local_upload_api.hpp"
#include "mobiscout/app/run.hpp"
#include "mobiscout/app/sim_devices.hpp"
#include "mobiscout/sim/dongle.hpp"

namespace mobiscout::app {
namespace {

namespace fs = std::filesystem;
using model::Stream;
using nlohmann::json;

fs::path fresh_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("mobiscout_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

sim::Scenario city() { return sim::Scenario::load(fs::path(MOBISCOUT_SCENARIO_DIR) / "city-deadzone.json"); }

uint64_t records_of(const RunReport& r, Stream s) {
  for (const auto& c : r.streams)
    if (c.stream == s) return c.records;
  return 0;
}

// --- orchestrated run ---------------------------------------------------------

TEST(Run, CityDeadZoneKeepsFidelity) {
  RunOptions options;
  options.journal.max_chunk_bytes = 256 * 1024;
  const auto report = run_scenario(city(), options);
  for (const auto& p : report.problems) ADD_FAILURE() << p;
  ASSERT_TRUE(report.fidelity());
  EXPECT_FALSE(fs::exists(report.work_dir));
  EXPECT_EQ(records_of(report, Stream::kMotion), 90u);
  EXPECT_EQ(records_of(report, Stream::kHeart), 18u);
  EXPECT_EQ(records_of(report, Stream::kVideoFront), 2700u);
  ASSERT_EQ(report.zones.size(), 1u);
  const auto& zone = report.zones.front();
  EXPECT_EQ(zone.start_ms, 30'000);
  EXPECT_TRUE(zone.server_static());
  EXPECT_TRUE(zone.local_grew());
  EXPECT_GT(zone.server_bytes_min, 0u);  // live upload was running before the zone
  EXPECT_TRUE(report.server_report.ok());
}

TEST(Run, IsDeterministicForASeed) {
  RunOptions options;
  options.journal.max_chunk_bytes = 512 * 1024;
  options.obd_over_tcp = false;
  auto scenario = sim::Scenario::constant(35, 20);
  scenario.dead_zones = {{5, 10}};
  const auto a = run_scenario(scenario, options);
  const auto b = run_scenario(scenario, options);
  ASSERT_TRUE(a.fidelity());
  ASSERT_TRUE(b.fidelity());
  EXPECT_NE(a.session_id, b.session_id);
  EXPECT_EQ(a.content_digest, b.content_digest);
  ASSERT_EQ(a.streams.size(), b.streams.size());
  for (size_t i = 0; i < a.streams.size(); ++i) {
    EXPECT_EQ(a.streams[i].stream, b.streams[i].stream);
    EXPECT_EQ(a.streams[i].records, b.streams[i].records);
    EXPECT_EQ(a.streams[i].chunks, b.streams[i].chunks);
  }
  scenario.seed += 1;
  EXPECT_NE(run_scenario(scenario, options).content_digest, a.content_digest);
}

TEST(Run, HonoursScenarioConsent) {
  auto scenario = sim::Scenario::constant(20, 10);
  model::ConsentProfile consent = model::ConsentProfile::all_granted();
  consent.set(model::Category::kHealth, false);
  consent.set(model::Category::kVideo, false);
  scenario.consent = consent;
  RunOptions options;
  options.obd_over_tcp = false;
  const auto report = run_scenario(scenario, options);
  ASSERT_TRUE(report.fidelity());
  EXPECT_EQ(records_of(report, Stream::kHeart), 0u);
  EXPECT_EQ(records_of(report, Stream::kVideoBack), 0u);
  EXPECT_EQ(records_of(report, Stream::kMotion), 10u);
}

// --- control API ----------------------------------------------------------------

struct Stack {
  Stack()
      : dir(fresh_dir("control")),
        clock(1'700'000'000'000),
        outbox(dir / "spool"),
        service({dir / "server", ingest::MasterKey::random(), ingest::KdfCost::minimum()}, clock, outbox),
        token(testing::active_token(service.accounts(), outbox.dir(), "ops@x.org")),
        upload(service, token),
        scenario(sim::Scenario::constant(50, 120)),
        emulator(std::make_shared<sim::DongleEmulator>(scenario, clock)),
        hub(scenario, clock, [this] { return std::make_unique<sim::LoopbackTransport>(emulator); }) {
    service.set_consent(token, model::ConsentProfile::all_granted());
    AgentConfig config;
    config.data_dir = dir / "agent";
    config.sync.durable = false;
    agent = std::make_unique<Agent>(config, clock, hub, upload);
    mount_control_api(server.routes(), *agent);
    server.bind("127.0.0.1", 0);
    server.start();
    client = std::make_unique<httplib::Client>("127.0.0.1", server.port());
  }
  ~Stack() {
    server.stop();
    agent.reset();
    fs::remove_all(dir);
  }

  std::pair<int, json> call(const std::string& method, const std::string& path, const json& body = nullptr) {
    httplib::Result res = method == "GET"    ? client->Get(path)
                          : method == "PUT"  ? client->Put(path, body.dump(), "application/json")
                          : method == "DELETE" ? client->Delete(path)
                          : client->Post(path, body.is_null() ? "" : body.dump(), "application/json");
    if (!res) throw std::runtime_error("no response for " + path);
    return {res->status, res->body.empty() ? json() : json::parse(res->body)};
  }

  void drive(int64_t ms) {
    const int64_t until = clock.now_ms() + ms;
    while (auto due = agent->recorder().next_due()) {
      if (*due > until) break;
      clock.set(*due);
      agent->recorder().advance_to(*due);
    }
    clock.set(until);
  }

  fs::path dir;
  ManualClock clock;
  ingest::SpoolOutbox outbox;
  ingest::IngestionService service;
  std::string token;
  LocalUploadApi upload;
  sim::Scenario scenario;
  std::shared_ptr<sim::DongleEmulator> emulator;
  SimDeviceHub hub;
  std::unique_ptr<Agent> agent;
  http::BackgroundServer server;
  std::unique_ptr<httplib::Client> client;
};

TEST(Control, SettingsAreValidatedAndPersisted) {
  Stack s;
  auto [status, body] = s.call("PUT", "/control/settings", {{"frameRate", 0}, {"frequency", 1}});
  EXPECT_EQ(status, 400);
  EXPECT_EQ(body["error"], "INVALID_ARGUMENT");
  std::tie(status, body) =
      s.call("PUT", "/control/settings", {{"frameRate", 15}, {"frequency", 2}, {"automaticUpload", false}});
  EXPECT_EQ(status, 200);
  EXPECT_EQ(s.call("GET", "/control/settings").second["frameRate"], 15);
  const json on_disk = json::parse(files::read_all(s.dir / "agent" / "settings.json"));
  EXPECT_EQ(on_disk["frequency"], 2);
  EXPECT_EQ(on_disk["automaticUpload"], false);
}

TEST(Control, RecordingLifecycle) {
  Stack s;
  auto [status, body] = s.call("POST", "/control/record/start");
  ASSERT_EQ(status, 201) << body.dump();
  const std::string sid = body["sessionId"];
  EXPECT_EQ(s.call("POST", "/control/record/start").second["error"], "ALREADY_RECORDING");

  s.drive(6'000);
  const json live = s.call("GET", "/control/status").second;
  EXPECT_TRUE(live["recording"].get<bool>());
  EXPECT_EQ(live["sessionId"], sid);
  EXPECT_EQ(live["obdState"], "Connected");
  EXPECT_NEAR(live["vehicleSpeed"]["value"].get<double>(), 50, 2);
  EXPECT_TRUE(live["heartRate"].is_object());
  EXPECT_EQ(live["elapsedMs"], 6'000);

  std::tie(status, body) = s.call("POST", "/control/record/stop");
  EXPECT_EQ(status, 200);
  EXPECT_EQ(body["status"], "finalized");
  EXPECT_EQ(s.call("POST", "/control/record/stop").first, 409);
  EXPECT_FALSE(s.call("GET", "/control/status").second["recording"].get<bool>());

  const json sessions = s.call("GET", "/control/sessions").second;
  ASSERT_EQ(sessions.size(), 1u);
  EXPECT_EQ(s.call("GET", "/control/sessions/" + sid).second["sessionId"], sid);
  EXPECT_EQ(s.call("GET", "/control/sessions/nope").first, 404);
}

TEST(Control, StartHonoursRequestedStreamsAndConsent) {
  Stack s;
  json consent = s.call("GET", "/control/consent").second;
  consent["health"] = "denied";
  EXPECT_EQ(s.call("PUT", "/control/consent", consent).first, 200);
  auto [status, body] = s.call("POST", "/control/record/start", {{"streams", {"heart"}}});
  EXPECT_EQ(status, 403);
  EXPECT_EQ(body["error"], "CONSENT_DENIED");
  std::tie(status, body) = s.call("POST", "/control/record/start", {{"streams", {"motion", "location"}}});
  ASSERT_EQ(status, 201);
  s.drive(2'000);
  const json m = s.call("POST", "/control/record/stop").second;
  EXPECT_EQ(m["streams"], json::array({"motion", "location"}));
}

TEST(Control, UploadsCanBeSteered) {
  Stack s;
  const std::string sid = s.call("POST", "/control/record/start").second["sessionId"];
  s.drive(3'000);
  s.call("POST", "/control/record/stop");

  json uploads = s.call("GET", "/control/uploads").second;
  ASSERT_EQ(uploads.size(), 1u);  // automatic upload enqueued a live task
  const std::string id = uploads[0]["taskId"];
  EXPECT_EQ(uploads[0]["sessionId"], sid);
  EXPECT_EQ(s.call("POST", "/control/uploads/" + id + "/pause").first, 409);  // still queued
  s.agent->sync().step();

  EXPECT_EQ(s.call("POST", "/control/uploads/" + id + "/pause").second["state"], "paused");
  EXPECT_EQ(s.call("POST", "/control/uploads/" + id + "/pause").second["error"], "INVALID_TRANSITION");
  EXPECT_EQ(s.call("POST", "/control/uploads/" + id + "/resume").second["state"], "running");
  while (s.agent->sync().step() > 0) {
  }
  const json done = s.call("GET", "/control/uploads/" + id).second;
  EXPECT_EQ(done["state"], "completed");
  EXPECT_DOUBLE_EQ(done["progress"].get<double>(), 1.0);
  EXPECT_EQ(s.call("POST", "/control/uploads/" + id + "/cancel").first, 409);
  EXPECT_EQ(s.call("GET", "/control/sessions/" + sid).second["status"], "uploaded");
  EXPECT_EQ(s.call("GET", "/control/uploads/unknown").first, 404);
}

TEST(Control, ManualUploadAndDelete) {
  Stack s;
  s.call("PUT", "/control/settings", {{"frameRate", 30}, {"frequency", 1}, {"automaticUpload", false}});
  const std::string sid = s.call("POST", "/control/record/start").second["sessionId"];
  s.drive(2'000);
  s.call("POST", "/control/record/stop");
  EXPECT_TRUE(s.call("GET", "/control/uploads").second.empty());

  EXPECT_EQ(s.call("POST", "/control/sessions/" + sid + "/upload", {{"mode", "sideways"}}).first, 400);
  auto [status, task] = s.call("POST", "/control/sessions/" + sid + "/upload");
  EXPECT_EQ(status, 202);
  EXPECT_EQ(task["mode"], "deferred");

  EXPECT_EQ(s.call("PUT", "/control/connectivity", {{"online", false}}).second["online"], false);
  EXPECT_EQ(s.agent->sync().step(), 0u);
  EXPECT_EQ(s.call("PUT", "/control/connectivity", {{"online", true}}).second["online"], true);

  EXPECT_EQ(s.call("POST", "/control/uploads/" + task["taskId"].get<std::string>() + "/cancel").second["state"],
            "canceled");
  EXPECT_EQ(s.call("DELETE", "/control/sessions/" + sid).first, 204);
  EXPECT_TRUE(s.call("GET", "/control/sessions").second.empty());
}

TEST(Control, StatusEventsStream) {
  Stack s;
  s.call("POST", "/control/record/start");
  std::string received;
  s.client->Get("/control/status/events", [&](const char* data, size_t n) {
    received.append(data, n);
    return received.find("\n\n") == std::string::npos;
  });
  ASSERT_TRUE(received.starts_with("data: "));
  const json frame = json::parse(received.substr(6, received.find("\n\n") - 6));
  EXPECT_TRUE(frame["recording"].get<bool>());
}

}  // namespace
}  // namespace mobiscout::app
