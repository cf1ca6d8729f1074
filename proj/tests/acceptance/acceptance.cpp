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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "accounts.hpp"
#include "library_fixture.hpp"
#include "mobiscout/app/local_upload_api.hpp"
#include "mobiscout/app/run.hpp"
#include "mobiscout/app/sim_devices.hpp"
#include "mobiscout/common/files.hpp"
#include "mobiscout/common/http.hpp"
#include "mobiscout/ingest/http_api.hpp"
#include "mobiscout/ingest/service.hpp"
#include "mobiscout/model/checksum.hpp"
#include "mobiscout/model/revalidate.hpp"
#include "mobiscout/obd/codec.hpp"
#include "mobiscout/recorder/recorder.hpp"
#include "mobiscout/sim/dongle.hpp"
#include "mobiscout/sim/emitters.hpp"
#include "mobiscout/sim/truth.hpp"
#include "mobiscout/sync/engine.hpp"
#include "synthetic_session.hpp"

namespace {

using namespace mobiscout;
namespace fs = std::filesystem;
using model::ConsentProfile;
using model::Stream;
using nlohmann::json;

constexpr double kStandardGravity = 9.80665;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Collects failures; the first few are reported.
class Findings {
 public:
  void fail(const std::string& what) {
    if (failures_++ < 5) detail_ << (detail_.tellp() > 0 ? "; " : "") << what;
  }
  bool ok() const { return failures_ == 0; }
  Outcome outcome(const std::string& summary) const {
    if (ok()) return {true, summary};
    return {false, summary + " | " + std::to_string(failures_) + " failure(s): " + detail_.str()};
  }

 private:
  int failures_ = 0;
  std::ostringstream detail_;
};

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("mobiscout_accept_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

sim::Scenario scenario_file(const std::string& name) {
  return sim::Scenario::load(fs::path(MOBISCOUT_SCENARIO_DIR) / name);
}

uint64_t records_of(const model::SessionManifest& m, Stream s) {
  uint64_t n = 0;
  for (const auto& c : m.chunks_of(s)) n += c.record_count;
  return n;
}

std::optional<Errc> error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// In-process ingestion service with a confirmed account.
struct Backend {
  explicit Backend(const std::string& name)
      : dir(scratch(name)),
        clock(1'700'000'000'000),
        outbox(dir / "spool"),
        service({dir / "server", ingest::MasterKey::random(), ingest::KdfCost::minimum()}, clock, outbox) {}
  ~Backend() { fs::remove_all(dir); }

  std::string token(const std::string& email, const ConsentProfile& consent = ConsentProfile::all_granted()) {
    const auto t = testing::active_token(service.accounts(), outbox.dir(), email);
    service.set_consent(t, consent);
    return t;
  }

  fs::path dir;
  ManualClock clock;
  ingest::SpoolOutbox outbox;
  ingest::IngestionService service;
};

// --- cadence ---------------------------------------------------------------------

Outcome cadence() {
  const auto wall_start = std::chrono::steady_clock::now();
  const auto dir = scratch("cadence");
  const auto scenario = scenario_file("default-60s.json");
  ScaledClock clock(scenario.start_time, 10.0);
  auto emulator = std::make_shared<sim::DongleEmulator>(scenario, clock);
  app::SimDeviceHub hub(scenario, clock, [&] { return std::make_unique<sim::LoopbackTransport>(emulator); });
  recorder::Recorder rec({dir, "driver", {}}, clock, hub);
  rec.start_pacer();
  const auto id = rec.start_session({}, ConsentProfile::all_granted()).session_id;
  const int64_t end = clock.now_ms() + scenario.duration_ms();
  while (clock.now_ms() < end) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  const auto m = rec.stop_session(id);
  rec.stop_pacer();
  fs::remove_all(dir);
  const double wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

  const auto heart = records_of(m, Stream::kHeart);
  const auto motion = records_of(m, Stream::kMotion);
  const auto front = records_of(m, Stream::kVideoFront);
  const auto back = records_of(m, Stream::kVideoBack);
  auto within = [](uint64_t v, double target, double tol) { return std::abs(static_cast<double>(v) - target) <= tol; };
  std::ostringstream s;
  s << "heart=" << heart << " motion=" << motion << " videoFront=" << front << " videoBack=" << back
    << " wall=" << std::fixed;
  s.precision(1);
  s << wall_s << "s (10x clock)";
  const bool pass = within(heart, 12, 1) && within(motion, 60, 1) && within(front, 1800, 30) &&
                    within(back, 1800, 30) && wall_s < 90;
  return {pass, s.str()};
}

// --- dead zone -------------------------------------------------------------------

Outcome dead_zone() {
  const auto scenario = scenario_file("city-deadzone.json");
  app::RunOptions options;
  options.journal.max_chunk_bytes = 256 * 1024;
  const auto report = app::run_scenario(scenario, options);
  Findings f;
  for (const auto& p : report.problems) f.fail(p);
  if (report.zones.size() != 1) f.fail("expected one dead zone, saw " + std::to_string(report.zones.size()));
  std::ostringstream s;
  for (const auto& z : report.zones) {
    s << "zone " << z.start_ms / 1000 << "-" << z.end_ms / 1000 << "s server " << z.server_bytes_min << ".."
      << z.server_bytes_max << " B, local " << z.local_bytes_at_entry << "->" << z.local_bytes_at_exit
      << " B; ";
    if (!z.server_static()) f.fail("server changed inside zone");
    if (!z.local_grew()) f.fail("local journal did not grow inside zone");
  }
  s << "digest-identical " << report.fidelity();
  return f.outcome(s.str());
}

// --- pause / resume / cancel ---------------------------------------------------------

// Remembers every upload created per session so canceled sessions can be
// checked for leftovers on the server.
class Ledger final : public sync::UploadApi {
 public:
  explicit Ledger(sync::UploadApi& inner) : inner_(inner) {}
  sync::RemoteUpload create_upload(const model::SessionManifest& m) override {
    auto r = inner_.create_upload(m);
    created[m.session_id].insert(r.upload_id);
    return r;
  }
  uint64_t put_chunk(const std::string& id, sync::ChunkRef c, std::string_view bytes,
                     const std::string& digest) override {
    return inner_.put_chunk(id, c, bytes, digest);
  }
  sync::RemoteUpload offset(const std::string& id) override { return inner_.offset(id); }
  model::ValidationReport complete(const std::string& id) override { return inner_.complete(id); }
  void abort(const std::string& id) override { inner_.abort(id); }

  std::map<std::string, std::set<std::string>> created;

 private:
  sync::UploadApi& inner_;
};

Outcome pause_resume_cancel() {
  constexpr int kSequences = 1000;
  constexpr int kPerEngine = 100;
  Backend b("prc");
  const auto token = b.token("prc@x.org");
  app::LocalUploadApi local(b.service, token);
  Ledger ledger(local);
  sync::ConnectivityGate gate(ledger);
  recorder::Library library(b.dir / "agent");
  sync::LibraryStore store(library);
  std::mt19937_64 rng(0x5eed'0001);
  const std::vector<Stream> streams(model::kAllStreams.begin(), model::kAllStreams.end());

  Findings f;
  int completed = 0, canceled = 0, paused_then_resumed = 0, transitions_seen = 0;
  std::unique_ptr<sync::SyncEngine> engine;
  auto set_online = [&](bool online) {
    gate.set_online(online);
    engine->on_connectivity(online);
  };
  auto settle = [&] {
    for (int i = 0; i < 10'000; ++i) {
      if (engine->step() > 0) continue;
      bool waiting = false;
      for (const auto& t : engine->tasks())
        if (t.state == sync::TaskState::kRunning && t.next_attempt_at > b.clock.now_ms()) {
          b.clock.set(t.next_attempt_at);
          waiting = true;
        }
      if (!waiting) return;
    }
    f.fail("engine did not settle");
  };
  auto check_transitions = [&] {
    for (const auto& t : engine->transitions()) {
      ++transitions_seen;
      if (t.from && !sync::legal_transition(*t.from, t.to))
        f.fail("illegal " + std::string(sync::task_state_name(*t.from)) + "->" +
               std::string(sync::task_state_name(t.to)));
    }
  };

  for (int seq = 0; seq < kSequences; ++seq) {
    if (seq % kPerEngine == 0) {
      if (engine) check_transitions();
      sync::SyncOptions options;
      options.data_dir = b.dir / ("engine" + std::to_string(seq / kPerEngine));
      options.durable = false;
      engine = std::make_unique<sync::SyncEngine>(options, store, gate, b.clock);
    }
    const std::string sid = "seq-" + std::to_string(seq);
    const auto session = testing::synthetic_session(sid, streams, ConsentProfile::all_granted(), 6,
                                                    1 + static_cast<uint32_t>(rng() % 3));
    testing::store_session(library, session);
    auto task = engine->enqueue(sid, sync::UploadMode::kDeferred);
    bool was_paused = false;
    const int commands = 4 + static_cast<int>(rng() % 16);
    for (int k = 0; k < commands; ++k) {
      const auto state = engine->task(task.task_id).state;
      try {
        switch (rng() % 7) {
          case 0:
            if (state == sync::TaskState::kRunning) {
              engine->pause(task.task_id);
              was_paused = true;
            }
            break;
          case 1:
            if (state == sync::TaskState::kPaused) engine->resume(task.task_id);
            break;
          case 2:
            if (rng() % 5 == 0 && (state == sync::TaskState::kQueued || state == sync::TaskState::kRunning ||
                                   state == sync::TaskState::kPaused))
              engine->cancel(task.task_id);
            break;
          case 3: set_online(rng() % 3 != 0); break;
          case 4: gate.fail_next(static_cast<int>(rng() % 2)); break;
          default:
            engine->step();
            b.clock.advance(static_cast<int64_t>(rng() % 1500));
            break;
        }
      } catch (const Error& e) {
        f.fail("seq " + std::to_string(seq) + ": " + e.what());
      }
    }
    gate.fail_next(0);
    set_online(true);
    if (engine->task(task.task_id).state == sync::TaskState::kPaused) {
      engine->resume(task.task_id);
      was_paused = true;
    }
    settle();
    task = engine->task(task.task_id);
    if (task.state == sync::TaskState::kCanceled) {
      ++canceled;
      for (const auto& upload_id : ledger.created[sid]) {
        const auto code = error_of([&] { b.service.get_offset(token, upload_id); });
        if (!code || http::status_for(*code) != 404)
          f.fail("canceled upload " + upload_id + " still answers " +
                 (code ? std::string(errc_name(*code)) : std::string("200")));
      }
      continue;
    }
    if (task.state != sync::TaskState::kCompleted) {
      f.fail("seq " + std::to_string(seq) + " ended " + std::string(sync::task_state_name(task.state)));
      continue;
    }
    ++completed;
    if (was_paused) ++paused_then_resumed;
    const auto remote = b.service.get_offset(token, task.upload_id);
    if (remote.confirmed.size() != session.manifest.chunks.size())
      f.fail("seq " + std::to_string(seq) + " chunk count differs");
    for (const auto& c : session.manifest.chunks) {
      const std::string stored = model::checksum(b.service.read_chunk(task.upload_id, c.stream, c.index));
      if (stored != c.digest) f.fail("seq " + std::to_string(seq) + " digest differs");
    }
  }
  check_transitions();
  std::ostringstream s;
  s << kSequences << " sequences, " << transitions_seen << " transitions checked, " << completed
    << " completed (" << paused_then_resumed << " after pause/resume), " << canceled << " canceled";
  return f.outcome(s.str());
}

// --- OBD codec ---------------------------------------------------------------------

Outcome codec_oracle() {
  Findings f;
  int checked = 0;
  for (const auto& spec : obd::pid_table()) {
    if (spec.formula == obd::Formula::kVinAscii) {
      std::mt19937_64 rng(17);
      const std::string alphabet = "ABCDEFGHJKLMNPRSTUVWXYZ0123456789";
      for (int i = 0; i < 256; ++i) {
        std::string vin;
        for (int k = 0; k < 17; ++k) vin.push_back(alphabet[rng() % alphabet.size()]);
        std::string reply;
        for (const auto& line : obd::format_vin_reply(vin)) reply += line + "\r";
        if (obd::decode_vin_reply(reply + ">") != vin) f.fail("vin " + vin);
        ++checked;
      }
      continue;
    }
    const double step = spec.quantization_step();
    for (int i = 0; i < 256; ++i) {
      const double truth = spec.min_value + (spec.max_value - spec.min_value) * i / 255.0;
      std::vector<uint8_t> frame{static_cast<uint8_t>(spec.mode + 0x40), spec.pid};
      for (uint8_t byte : obd::encode_value(spec, truth)) frame.push_back(byte);
      const double decoded = obd::decode_response(obd::format_bytes(frame) + "\r>", spec).value;
      const bool ok = spec.integer_formula() ? decoded == truth : std::abs(decoded - truth) <= step;
      if (!ok) f.fail(std::string(spec.name) + " " + std::to_string(truth) + " -> " + std::to_string(decoded));
      ++checked;
    }
  }
  // Through the dongle emulator: integer speeds of a constant-speed drive.
  for (int kmh = 0; kmh < 256; ++kmh) {
    const auto scenario = sim::Scenario::constant(kmh, 10);
    ManualClock clock(scenario.start_time + 5000);
    sim::DongleEmulator dongle(scenario, clock);
    dongle.respond("ATE0");
    const auto reading = obd::decode_response(dongle.respond("010D"), obd::pids::kVehicleSpeed);
    if (reading.value != kmh) f.fail("emulator " + std::to_string(kmh) + " km/h -> " + std::to_string(reading.value));
    ++checked;
  }
  if (obd::decode_response("41 0D 3C", obd::pids::kVehicleSpeed).value != 60) f.fail("41 0D 3C");
  return f.outcome(std::to_string(obd::pid_table().size()) + " PIDs, " + std::to_string(checked) +
                   " round trips, \"41 0D 3C\" = 60 km/h");
}

// --- kinematics --------------------------------------------------------------------

Outcome kinematics() {
  std::vector<sim::Scenario> scenarios{scenario_file("city-deadzone.json"), scenario_file("highway.json"),
                                       scenario_file("default-60s.json")};
  std::mt19937_64 rng(99);
  for (int i = 0; i < 5; ++i) {
    sim::Scenario s;
    s.seed = 1000 + i;
    s.route = {38.9 + 0.1 * i, -77.0, static_cast<double>(rng() % 360)};
    double t = 0, v = static_cast<double>(rng() % 60);
    while (t < 120) {
      const double len = 5 + static_cast<double>(rng() % 20);
      const double next = static_cast<double>(rng() % 120);
      s.speed_profile.push_back({t, std::min(120.0, t + len), v, next});
      t = std::min(120.0, t + len);
      v = next;
    }
    s.duration = 120;
    scenarios.push_back(s);
  }

  Findings f;
  double worst_dv = 0, worst_dist = 0;
  size_t segments = 0;
  for (auto s : scenarios) {
    s.noise = sim::NoiseTable::none();
    const auto samples = sim::MotionEmitter(s, 100).all();
    for (const auto& seg : s.speed_profile) {
      const int64_t a = s.start_time + static_cast<int64_t>(seg.t_start * 1000);
      const int64_t b = s.start_time + static_cast<int64_t>(seg.t_end * 1000);
      double dv = 0;
      for (size_t i = 1; i < samples.size(); ++i) {
        if (samples[i - 1].t < a || samples[i].t > b) continue;
        // Zero-order hold: each sample holds until the next one.
        const double dt = (samples[i].t - samples[i - 1].t) / 1000.0;
        dv += samples[i - 1].acceleration_x * kStandardGravity * dt * 3.6;
      }
      const double err = std::abs(dv - (seg.end_speed - seg.start_speed));
      worst_dv = std::max(worst_dv, err);
      if (err > 0.1) f.fail("segment dv error " + std::to_string(err) + " km/h");
      ++segments;
    }

    const auto fixes = sim::LocationEmitter(s, 10).all();
    double gps = 0, integrated = 0;
    for (size_t i = 1; i < fixes.size(); ++i) {
      gps += sim::great_circle_m(fixes[i - 1].latitude, fixes[i - 1].longitude, fixes[i].latitude,
                                 fixes[i].longitude);
    }
    // Independent integral of the speed profile over the span of the fixes.
    const double t0 = (fixes.front().t - s.start_time) / 1000.0, t1 = (fixes.back().t - s.start_time) / 1000.0;
    for (const auto& seg : s.speed_profile) {
      const double lo = std::max(t0, seg.t_start), hi = std::min(t1, seg.t_end);
      if (hi <= lo) continue;
      auto speed = [&](double t) {
        return seg.start_speed + (seg.end_speed - seg.start_speed) * (t - seg.t_start) / (seg.t_end - seg.t_start);
      };
      integrated += 0.5 * (speed(lo) + speed(hi)) / 3.6 * (hi - lo);
    }
    const double rel = integrated > 0 ? std::abs(gps - integrated) / integrated : gps;
    worst_dist = std::max(worst_dist, rel);
    if (rel > 0.01) f.fail("distance off by " + std::to_string(rel * 100) + "%");
  }
  std::ostringstream s;
  s << scenarios.size() << " scenarios, " << segments << " segments, worst |dv| " << worst_dv
    << " km/h, worst distance error " << worst_dist * 100 << "%";
  return f.outcome(s.str());
}

// --- consent -------------------------------------------------------------------------

Outcome consent_totality() {
  Backend b("consent");
  http::BackgroundServer server;
  ingest::mount_ingestion_api(server.routes(), b.service);
  server.bind("127.0.0.1", 0);
  server.start();
  const std::string base = "http://127.0.0.1:" + std::to_string(server.port());

  Findings f;
  int accepted = 0, rejected = 0;
  for (unsigned mask = 0; mask < 32; ++mask) {
    const auto granted = ConsentProfile::from_mask(mask);
    const auto token = b.token("matrix" + std::to_string(mask) + "@x.org", granted);
    sync::HttpUploadApi api(base, [&] { return token; });
    for (unsigned subset = 0; subset < 64; ++subset) {
      std::vector<Stream> streams;
      bool allowed = true;
      for (size_t i = 0; i < model::kAllStreams.size(); ++i) {
        if (!(subset >> i & 1u)) continue;
        streams.push_back(model::kAllStreams[i]);
        allowed = allowed && granted.granted(model::category_of(model::kAllStreams[i]));
      }
      const auto s = testing::synthetic_session("c" + std::to_string(mask) + "-" + std::to_string(subset), streams,
                                                ConsentProfile::all_granted(), 2, 1);
      bool ok = false;
      try {
        const auto upload = api.create_upload(s.manifest);
        for (const auto& c : s.manifest.chunks)
          api.put_chunk(upload.upload_id, {c.stream, c.index}, s.bytes(c.stream, c.index), c.digest);
        ok = api.complete(upload.upload_id).ok();
      } catch (const Error& e) {
        if (e.code() != Errc::kValidationFailed) f.fail(std::string("unexpected ") + e.what());
      }
      (ok ? accepted : rejected)++;
      if (ok != allowed) f.fail("mask " + std::to_string(mask) + " subset " + std::to_string(subset));
    }
  }
  server.stop();

  // A real recording with health denied leaves no heart data anywhere.
  auto consent = ConsentProfile::all_granted();
  consent.set(model::Category::kHealth, false);
  const auto token = b.token("noheart@x.org", consent);
  app::LocalUploadApi api(b.service, token);
  const auto scenario = sim::Scenario::constant(30, 30);
  ManualClock clock(scenario.start_time);
  auto emulator = std::make_shared<sim::DongleEmulator>(scenario, clock);
  app::SimDeviceHub hub(scenario, clock, [&] { return std::make_unique<sim::LoopbackTransport>(emulator); });
  recorder::Recorder rec({b.dir / "agent", "driver", {}}, clock, hub);
  sync::LibraryStore store(rec.library());
  sync::SyncOptions options;
  options.data_dir = b.dir / "agent";
  options.durable = false;
  sync::SyncEngine engine(options, store, api, b.clock);
  const auto sid = rec.start_session({}, consent).session_id;
  while (auto due = rec.next_due()) {
    clock.set(*due);
    rec.advance_to(*due);
  }
  const auto manifest = rec.stop_session(sid);
  const auto task = engine.enqueue(sid, sync::UploadMode::kDeferred);
  while (engine.step() > 0) {
  }
  const auto done = engine.task(task.task_id);
  if (done.state != sync::TaskState::kCompleted) f.fail("health-denied upload did not complete");
  if (manifest.has_stream(Stream::kHeart) || manifest.health_snapshot) f.fail("manifest carries health data");

  // A heart value or health history; the unit declaration "heartRate": "bpm" is not data.
  const std::regex heart_data(R"("heartRate"\s*:\s*[-0-9]|"HeartRate"\s*:\s*\[)");
  auto scan_plain = [&](const std::string& where, const std::string& bytes) {
    if (std::regex_search(bytes, heart_data)) f.fail(where + " contains heart data");
  };
  size_t client_files = 0, server_chunks = 0;
  for (const auto& entry : fs::recursive_directory_iterator(rec.library().session_dir(sid))) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename().string().starts_with("heart")) f.fail("client heart file " + entry.path().string());
    scan_plain(entry.path().string(), files::read_all(entry.path()));
    ++client_files;
  }
  if (!done.upload_id.empty()) {
    const auto remote = b.service.get_offset(token, done.upload_id);
    if (remote.manifest.has_stream(Stream::kHeart) || remote.manifest.health_snapshot)
      f.fail("server manifest carries health data");
    for (const auto& c : remote.confirmed) {
      if (c.stream == Stream::kHeart) f.fail("server holds a heart chunk");
      scan_plain("server chunk", b.service.read_chunk(done.upload_id, c.stream, c.index));
      ++server_chunks;
    }
    for (const auto& entry : fs::recursive_directory_iterator(b.service.upload_dir(done.upload_id)))
      if (entry.path().filename().string().starts_with("heart")) f.fail("server heart file");
  }
  std::ostringstream s;
  s << "32x64 matrix: " << accepted << " accepted, " << rejected << " rejected; health-denied session: "
    << client_files << " client files and " << server_chunks << " server chunks free of heart data";
  return f.outcome(s.str());
}

// --- crash durability -------------------------------------------------------------------

// Child: records forever, reporting every closed chunk on `fd`.
[[noreturn]] void crash_child(const fs::path& dir, int fd, uint64_t seed) {
  auto scenario = sim::Scenario::constant(45, 3600);
  scenario.seed = seed;
  ManualClock clock(scenario.start_time);
  auto emulator = std::make_shared<sim::DongleEmulator>(scenario, clock);
  app::SimDeviceHub hub(scenario, clock, [&] { return std::make_unique<sim::LoopbackTransport>(emulator); });
  recorder::Recorder rec({dir, "driver", {64 * 1024, 0}}, clock, hub);
  auto emit = [fd](const std::string& line) {
    const std::string text = line + "\n";
    if (::write(fd, text.data(), text.size()) != static_cast<ssize_t>(text.size())) ::_exit(3);
  };
  rec.on_chunk_closed([&](const std::string&, const model::ChunkInfo& c) {
    emit("chunk " + std::string(model::stream_name(c.stream)) + " " + std::to_string(c.index) + " " + c.digest);
  });
  const auto sid = rec.start_session({}, ConsentProfile::all_granted()).session_id;
  emit("session " + sid);
  while (auto due = rec.next_due()) {
    clock.set(*due);
    rec.advance_to(*due);
  }
  ::_exit(0);
}

Outcome crash_durability() {
  constexpr int kKills = 20;
  const auto dir = scratch("crash");
  std::mt19937_64 rng(4242);
  Findings f;
  uint64_t closed_total = 0, recovered_total = 0;
  for (int round = 0; round < kKills; ++round) {
    const fs::path data = dir / ("run" + std::to_string(round));
    int fds[2];
    if (::pipe(fds) != 0) return {false, "pipe failed"};
    const pid_t child = ::fork();
    if (child < 0) return {false, "fork failed"};
    if (child == 0) {
      ::close(fds[0]);
      crash_child(data, fds[1], rng());
    }
    ::close(fds[1]);
    std::this_thread::sleep_for(std::chrono::milliseconds(30 + rng() % 1200));
    ::kill(child, SIGKILL);
    int status = 0;
    ::waitpid(child, &status, 0);

    std::string text;
    char buf[4096];
    for (ssize_t n; (n = ::read(fds[0], buf, sizeof buf)) > 0;) text.append(buf, static_cast<size_t>(n));
    ::close(fds[0]);

    std::string sid;
    std::map<std::pair<std::string, uint32_t>, std::string> closed;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
      std::istringstream words(line);
      std::string kind;
      words >> kind;
      if (kind == "session") {
        words >> sid;
      } else if (kind == "chunk") {
        std::string stream, digest;
        uint32_t index = 0;
        words >> stream >> index >> digest;
        if (!digest.empty()) closed[{stream, index}] = digest;
      }
    }
    if (sid.empty()) {
      f.fail("round " + std::to_string(round) + " killed before the session started");
      continue;
    }
    recorder::Library library(data);
    const auto recovered = library.recover_all();
    const auto manifest = library.load(sid);
    if (std::find(recovered.begin(), recovered.end(), sid) == recovered.end())
      f.fail("round " + std::to_string(round) + " session not recovered");
    if (manifest.status != model::SessionStatus::kFinalized) f.fail("round " + std::to_string(round) + " not finalized");
    for (const auto& [key, digest] : closed) {
      const auto s = model::parse_stream(key.first);
      const auto it = std::find_if(manifest.chunks.begin(), manifest.chunks.end(), [&](const model::ChunkInfo& c) {
        return c.stream == *s && c.index == key.second;
      });
      if (it == manifest.chunks.end() || it->digest != digest)
        f.fail("round " + std::to_string(round) + " lost " + key.first + "." + std::to_string(key.second));
    }
    recorder::DirectoryChunkReader reader(library.session_dir(sid));
    const auto report = model::revalidate_manifest(manifest, reader, {.sample_every = 1, .extra_check = obd::decode_check});
    if (!report.ok())
      f.fail("round " + std::to_string(round) + " revalidation: " + report.errors.front().code);
    closed_total += closed.size();
    recovered_total += manifest.chunks.size();
  }
  fs::remove_all(dir);
  std::ostringstream s;
  s << kKills << " SIGKILLs, " << closed_total << " closed chunks all recovered (" << recovered_total
    << " chunks after recovery), revalidation clean";
  return f.outcome(s.str());
}

// --- encryption at rest ----------------------------------------------------------------

Outcome encryption_at_rest() {
  Backend b("crypto");
  const auto token = b.token("vault@x.org");
  const std::vector<Stream> streams(model::kAllStreams.begin(), model::kAllStreams.end());
  std::vector<std::string> sentinels;
  std::vector<std::string> uploads;
  for (int i = 0; i < 4; ++i) {
    auto s = testing::synthetic_session("vault-session-" + std::to_string(i) + "-SENTINEL", streams,
                                        ConsentProfile::all_granted(), 20, 2);
    const auto upload = b.service.create_upload(token, s.manifest);
    for (const auto& c : s.manifest.chunks) {
      const std::string bytes = s.bytes(c.stream, c.index);
      b.service.put_chunk(token, upload.upload_id, c.stream, c.index, bytes, c.digest);
      for (size_t at : {size_t{0}, bytes.size() / 2, bytes.size() - 48})
        if (bytes.size() >= 48) sentinels.push_back(bytes.substr(at, 48));
    }
    b.service.complete(token, upload.upload_id);
    sentinels.push_back(s.manifest.session_id);
    uploads.push_back(upload.upload_id);
  }

  Findings f;
  size_t files_scanned = 0;
  for (const auto& entry : fs::recursive_directory_iterator(b.service.data_dir())) {
    if (!entry.is_regular_file()) continue;
    const std::string bytes = files::read_all(entry.path());
    ++files_scanned;
    for (const auto& needle : sentinels)
      if (bytes.find(needle) != std::string::npos) f.fail("plaintext in " + entry.path().filename().string());
  }

  std::mt19937_64 rng(31337);
  size_t flips = 0;
  for (const auto& upload_id : uploads) {
    for (const auto& c : b.service.get_offset(token, upload_id).confirmed) {
      const fs::path path = b.service.upload_dir(upload_id) / "chunks" /
                            (model::chunk_file_name(c.stream, c.index) + ".sealed");
      const std::string original = files::read_all(path);
      std::string flipped = original;
      flipped[rng() % flipped.size()] ^= static_cast<char>(1u << (rng() % 8));
      files::write_atomic(path, flipped);
      if (error_of([&] { b.service.read_chunk(upload_id, c.stream, c.index); }) != Errc::kTampered)
        f.fail("bit flip in " + path.filename().string() + " went unnoticed");
      files::write_atomic(path, original);
      ++flips;
    }
  }
  std::ostringstream s;
  s << sentinels.size() << " sentinels across " << files_scanned << " files: 0 hits expected; " << flips
    << " single-bit flips -> TAMPERED";
  return f.outcome(s.str());
}

// --- account flow ------------------------------------------------------------------------

Outcome account_flow() {
  Backend b("accounts");
  http::BackgroundServer server;
  ingest::mount_ingestion_api(server.routes(), b.service);
  server.bind("127.0.0.1", 0);
  server.start();
  httplib::Client client("127.0.0.1", server.port());
  auto post = [&](const std::string& path, const json& body) {
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res) throw Error(Errc::kNetwork, path);
    return std::pair<int, json>{res->status, json::parse(res->body, nullptr, false)};
  };
  Findings f;
  auto expect = [&](const std::pair<int, json>& got, int status, const std::string& code, const std::string& step) {
    if (got.first != status || (!code.empty() && got.second.value("error", "") != code))
      f.fail(step + ": " + std::to_string(got.first) + " " + got.second.dump());
  };
  const json creds{{"email", "flow@x.org"}, {"password", "a strong password"}};

  expect(post("/v1/register", creds), 201, "", "register");
  expect(post("/v1/login", creds), 403, "NOT_CONFIRMED", "login before confirm");
  const std::string code = testing::spooled_code(b.outbox.dir(), "flow@x.org");
  for (int i = 0; i < 3; ++i) {
    const std::string wrong = code == "000000" ? "111111" : "000000";
    expect(post("/v1/confirm", {{"email", "flow@x.org"}, {"code", wrong}}), 400, "BAD_CODE", "wrong code");
  }
  expect(post("/v1/confirm", {{"email", "flow@x.org"}, {"code", code}}), 400, "EXPIRED_CODE",
         "code after three failures");
  expect(post("/v1/register", creds), 201, "", "register again");
  const std::string fresh = testing::spooled_code(b.outbox.dir(), "flow@x.org");
  expect(post("/v1/confirm", {{"email", "flow@x.org"}, {"code", fresh}}), 200, "", "confirm");
  const auto login = post("/v1/login", creds);
  expect(login, 200, "", "login");
  const std::string token = login.second.value("token", "");
  auto authed = client.Get("/v1/sessions", {{"Authorization", "Bearer " + token}});
  if (!authed || authed->status != 200) f.fail("authenticated call failed");
  auto anonymous = client.Get("/v1/sessions");
  if (!anonymous || anonymous->status != 401) f.fail("anonymous call was not rejected");
  server.stop();
  return f.outcome("register -> spooled code -> confirm -> login -> GET /v1/sessions 200; NOT_CONFIRMED before "
                   "confirm; 3 bad codes invalidate the code");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"cadence", cadence},
      {"dead-zone store-and-forward", dead_zone},
      {"pause/resume/cancel state machine", pause_resume_cancel},
      {"OBD codec oracle", codec_oracle},
      {"kinematic consistency", kinematics},
      {"consent totality", consent_totality},
      {"crash durability", crash_durability},
      {"encryption at rest", encryption_at_rest},
      {"account flow", account_flow},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
