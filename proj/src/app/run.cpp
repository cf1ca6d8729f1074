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

#include "mobiscout/app/run.hpp"

#include <algorithm>
#include <regex>

#include <httplib.h>

#include "mobiscout/app/agent.hpp"
#include "mobiscout/app/sim_devices.hpp"
#include "mobiscout/common/error.hpp"
#include "mobiscout/common/files.hpp"
#include "mobiscout/common/http.hpp"
#include "mobiscout/ingest/http_api.hpp"
#include "mobiscout/ingest/service.hpp"
#include "mobiscout/model/checksum.hpp"
#include "mobiscout/model/serialize.hpp"
#include "mobiscout/sim/dongle.hpp"
#include "mobiscout/sim/emitters.hpp"
#include "mobiscout/sync/upload_api.hpp"

namespace mobiscout::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kPassword = "scenario-run-password";
constexpr int kMaxIdleSteps = 100'000;

json post(httplib::Client& client, const std::string& path, const json& body,
          const std::string& token = {}) {
  httplib::Headers headers;
  if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
  const std::string text = body.dump();
  auto res = token.empty() ? client.Post(path, headers, text, "application/json")
                           : client.Put(path, headers, text, "application/json");
  if (!res) throw Error(Errc::kNetwork, path + ": " + httplib::to_string(res.error()));
  if (res->status >= 300) throw http::error_from_response(res->status, res->body);
  return json::parse(res->body);
}

// Returns a bearer token for a freshly confirmed account.
std::string sign_up(httplib::Client& client, const ingest::SpoolOutbox& spool,
                    const std::string& email) {
  post(client, "/v1/register", {{"email", email}, {"password", kPassword}});
  const auto body = spool.latest_body(email);
  std::smatch m;
  if (!body || !std::regex_search(*body, m, std::regex("([0-9]{6})")))
    throw Error(Errc::kNotFound, "no confirmation code spooled for " + email);
  post(client, "/v1/confirm", {{"email", email}, {"code", m[1].str()}});
  return post(client, "/v1/login", {{"email", email}, {"password", kPassword}}).at("token");
}

uint64_t directory_bytes(const fs::path& dir) {
  uint64_t total = 0;
  if (!fs::exists(dir)) return 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file()) total += entry.file_size();
  return total;
}

std::optional<size_t> zone_at(const sim::Scenario& scenario, int64_t rel_ms) {
  for (size_t i = 0; i < scenario.dead_zones.size(); ++i) {
    const auto& z = scenario.dead_zones[i];
    if (rel_ms >= static_cast<int64_t>(z.t_start * 1000) && rel_ms < static_cast<int64_t>(z.t_end * 1000))
      return i;
  }
  return std::nullopt;
}

std::vector<int64_t> zone_edges(const sim::Scenario& scenario) {
  std::vector<int64_t> edges;
  for (const auto& change : sim::connectivity_signal(scenario)) edges.push_back(change.t);
  return edges;
}

}  // namespace

RunReport run_scenario(const sim::Scenario& scenario, RunOptions options) {
  scenario.validate();
  auto say = [&](const std::string& line) {
    if (options.log) options.log(line);
  };

  RunReport report;
  const bool temporary = options.work_dir.empty();
  report.work_dir = temporary ? fs::temp_directory_path() / ("mobiscout-run-" + files::new_uuid())
                              : options.work_dir;
  fs::create_directories(report.work_dir);

  ManualClock clock(scenario.start_time);
  const int64_t start = scenario.start_time;
  const int64_t end = start + scenario.duration_ms();

  // Server.
  ingest::SpoolOutbox spool(report.work_dir / "server" / "outbox");
  ingest::IngestionService service(
      {report.work_dir / "server", ingest::MasterKey::random(), ingest::KdfCost::minimum()}, clock, spool);
  http::BackgroundServer server;
  ingest::mount_ingestion_api(server.routes(), service);
  const int port = server.bind("127.0.0.1", 0);
  server.start();
  const std::string base_url = "http://127.0.0.1:" + std::to_string(port);
  say("ingestion service on " + base_url);

  httplib::Client client(base_url);
  const std::string token = sign_up(client, spool, "driver-" + std::to_string(scenario.seed) + "@example.org");
  const auto consent = scenario.consent.value_or(model::ConsentProfile::all_granted());
  post(client, "/v1/consent", json(consent), token);
  say("account confirmed, consent stored");

  // Devices.
  auto emulator = std::make_shared<sim::DongleEmulator>(scenario, clock);
  std::unique_ptr<sim::DongleServer> dongle;
  TransportFactory transport;
  if (options.obd_over_tcp) {
    dongle = std::make_unique<sim::DongleServer>(emulator, "127.0.0.1", 0);
    transport = [port = dongle->port()] { return std::make_unique<obd::TcpTransport>("127.0.0.1", port); };
    say("dongle emulator on " + dongle->endpoint());
  } else {
    transport = [emulator] { return std::make_unique<sim::LoopbackTransport>(emulator); };
  }
  SimDeviceHub devices(scenario, clock, transport);

  // Phone.
  sync::HttpUploadApi remote(base_url, [&] { return token; });
  sync::ConnectivityGate link(remote, sim::online_at(scenario, 0));
  AgentConfig config;
  config.data_dir = report.work_dir / "agent";
  config.user_id = "driver";
  config.journal = options.journal;
  config.online = link.online();
  Agent agent(config, clock, devices, link);
  const auto settings = scenario.settings.value_or(model::UserSettings{});
  auto& engine = agent.sync();

  auto drain = [&] {
    for (int i = 0; i < kMaxIdleSteps && engine.step() > 0; ++i) {
    }
  };
  auto server_bytes = [&]() -> uint64_t {
    const auto task = engine.task_for_session(report.session_id);
    if (!task || task->upload_id.empty()) return 0;
    try {
      return service.get_offset(token, task->upload_id).confirmed_bytes();
    } catch (const Error&) {
      return 0;
    }
  };
  auto set_online = [&](bool online) {
    link.set_online(online);
    agent.set_online(online);
  };

  report.session_id = agent.start_recording(settings, consent).session_id;
  say("recording session " + report.session_id);
  const fs::path session_dir = agent.library().session_dir(report.session_id);

  std::optional<size_t> zone;
  auto observe = [&](int64_t now) {
    const auto inside = zone_at(scenario, now - start);
    if (inside != zone) {
      if (zone) {
        auto& z = report.zones.back();
        z.local_bytes_at_exit = directory_bytes(session_dir);
        z.calls_inside = link.calls_delivered() - z.calls_inside;
        say("left dead zone at " + std::to_string(now - start) + " ms");
      }
      zone = inside;
      if (zone) {
        const auto& dz = scenario.dead_zones[*zone];
        ZoneObservation z;
        z.start_ms = static_cast<int64_t>(dz.t_start * 1000);
        z.end_ms = static_cast<int64_t>(dz.t_end * 1000);
        z.server_bytes_min = z.server_bytes_max = server_bytes();
        z.local_bytes_at_entry = directory_bytes(session_dir);
        z.calls_inside = link.calls_delivered();  // baseline until exit
        report.zones.push_back(z);
        say("entered dead zone at " + std::to_string(now - start) + " ms");
      }
      set_online(!zone);
    }
    if (zone) {
      auto& z = report.zones.back();
      const uint64_t b = server_bytes();
      z.server_bytes_min = std::min(z.server_bytes_min, b);
      z.server_bytes_max = std::max(z.server_bytes_max, b);
    }
  };

  const auto edges = zone_edges(scenario);
  observe(start);
  while (true) {
    std::optional<int64_t> next = agent.recorder().next_due();
    for (int64_t e : edges)
      if (start + e > clock.now_ms() && (!next || start + e < *next)) next = start + e;
    if (!next || *next > end) break;
    clock.set(*next);
    observe(*next);
    agent.recorder().advance_to(*next);
    drain();
    observe(*next);
  }
  clock.set(end);
  observe(end);
  if (zone) {
    auto& z = report.zones.back();
    z.local_bytes_at_exit = directory_bytes(session_dir);
    z.calls_inside = link.calls_delivered() - z.calls_inside;
  }
  const auto manifest = agent.stop_recording();
  say("recording stopped with " + std::to_string(manifest.chunks.size()) + " chunks");

  // Back in coverage: flush everything, jumping over any retry backoff.
  set_online(true);
  if (!engine.task_for_session(report.session_id)) engine.enqueue(report.session_id, sync::UploadMode::kDeferred);
  engine.wake();
  for (int round = 0; round < 64; ++round) {
    drain();
    const auto task = engine.task_for_session(report.session_id);
    if (!task || task->state == sync::TaskState::kCompleted || task->state == sync::TaskState::kFailed) break;
    if (task->next_attempt_at > clock.now_ms()) clock.set(task->next_attempt_at);
  }

  const auto task = engine.task_for_session(report.session_id);
  report.upload_id = task ? task->upload_id : std::string();

  // Fidelity.
  for (model::Stream s : manifest.streams) {
    StreamCount c{s, 0, 0};
    for (const auto& chunk : manifest.chunks_of(s)) {
      c.records += chunk.record_count;
      ++c.chunks;
    }
    report.streams.push_back(c);
  }
  model::Sha256 content;
  for (const auto& chunk : manifest.chunks) content.update(chunk.digest);
  report.content_digest = content.hex_digest();
  report.local_bytes = directory_bytes(session_dir);

  if (!task || task->state != sync::TaskState::kCompleted) {
    report.problems.push_back("upload did not complete: " +
                              (task ? task->last_error.value_or(std::string(sync::task_state_name(task->state)))
                                    : std::string("no task")));
  } else {
    const auto remote_state = service.get_offset(token, report.upload_id);
    report.server_bytes = remote_state.confirmed_bytes();
    if (remote_state.report) report.server_report = *remote_state.report;
    if (remote_state.confirmed.size() != manifest.chunks.size())
      report.problems.push_back("server holds " + std::to_string(remote_state.confirmed.size()) + " of " +
                                std::to_string(manifest.chunks.size()) + " chunks");
    for (const auto& chunk : manifest.chunks) {
      const auto name = model::chunk_file_name(chunk.stream, chunk.index);
      const auto local = model::checksum(files::read_all(session_dir / name));
      std::string stored;
      try {
        stored = model::checksum(service.read_chunk(report.upload_id, chunk.stream, chunk.index));
      } catch (const Error& e) {
        report.problems.push_back(name + ": " + e.what());
        continue;
      }
      if (local != chunk.digest) report.problems.push_back(name + ": local copy differs from manifest");
      if (stored != chunk.digest) report.problems.push_back(name + ": server copy differs from phone");
    }
  }
  for (const auto& z : report.zones) {
    if (!z.server_static())
      report.problems.push_back("server content changed inside dead zone at " + std::to_string(z.start_ms) + " ms");
    if (!z.local_grew())
      report.problems.push_back("local journal did not grow inside dead zone at " + std::to_string(z.start_ms) +
                                " ms");
  }

  agent.stop();
  if (dongle) dongle->stop();
  server.stop();
  if (temporary && report.fidelity() && !options.keep_work_dir) {
    std::error_code ec;
    fs::remove_all(report.work_dir, ec);
  }
  return report;
}

}  // namespace mobiscout::app
