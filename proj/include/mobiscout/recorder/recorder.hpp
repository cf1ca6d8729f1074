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

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mobiscout/common/clock.hpp"
#include "mobiscout/model/manifest.hpp"
#include "mobiscout/model/types.hpp"
#include "mobiscout/obd/client.hpp"
#include "mobiscout/recorder/journal.hpp"
#include "mobiscout/recorder/library.hpp"

namespace mobiscout::recorder {

// A periodic producer feeding one journal stream.
class StreamSource {
 public:
  virtual ~StreamSource() = default;
  virtual model::Stream stream() const = 0;
  // Absolute time (ms) of tick k >= 1, or nullopt once the source is exhausted.
  virtual std::optional<int64_t> tick_time(uint64_t k) const = 0;
  // Records for tick k; may be empty (e.g. an OBD read that failed).
  virtual std::vector<model::RecordPayload> produce(uint64_t k, int64_t t) = 0;
};

struct SessionSources {
  std::vector<std::unique_ptr<StreamSource>> streams;
  std::optional<model::VehicleInfo> vehicle;
  std::optional<model::RawHealth> health;
  std::vector<std::string> warnings;
  // Adapter state shown in live status; empty when there is no adapter.
  std::function<obd::AdapterState()> obd_state;
};

// Opens device sources for a session. Only sources for `streams` are
// requested. A missing vehicle adapter is reported with the warning
// "OBD_UNAVAILABLE" and no vehicle source.
class DeviceHub {
 public:
  virtual ~DeviceHub() = default;
  virtual SessionSources open(const model::UserSettings& settings,
                              const std::vector<model::Stream>& streams, int64_t start_ms) = 0;
};

struct Timestamped {
  double value = 0;
  int64_t t = 0;
};

struct LiveStatus {
  bool recording = false;
  std::optional<std::string> session_id;
  std::optional<Timestamped> heart_rate;      // bpm
  std::optional<Timestamped> vehicle_speed;   // km/h
  std::optional<Timestamped> acceleration_z;  // g
  std::string obd_state = "Disconnected";
  std::optional<int64_t> elapsed_ms;
  std::vector<std::string> warnings;
};

struct RecorderOptions {
  std::filesystem::path data_dir;
  std::string user_id = "local";
  JournalOptions journal;
};

struct StartResult {
  std::string session_id;
  std::vector<std::string> warnings;
};

// Session lifecycle and multi-stream scheduler. Ticks are produced in time
// order by advance_to(), either from the built-in pacing thread or by a
// caller that owns the clock.
class Recorder {
 public:
  using ChunkHook = std::function<void(const std::string& session_id, const model::ChunkInfo&)>;
  using SessionHook = std::function<void(const model::SessionManifest&)>;

  Recorder(RecorderOptions options, Clock& clock, DeviceHub& devices);
  ~Recorder();
  Recorder(const Recorder&) = delete;
  Recorder& operator=(const Recorder&) = delete;

  // `streams` empty means every stream the consent profile allows. Throws
  // kAlreadyRecording, kConsentDenied (naming the stream) or
  // kInvalidArgument for out-of-range settings.
  StartResult start_session(const model::UserSettings& settings,
                            const model::ConsentProfile& consent,
                            const std::vector<model::Stream>& streams = {});
  // Throws kNotRecording.
  model::SessionManifest stop_session(const std::string& session_id);

  // Produces every tick due at or before `t`.
  void advance_to(int64_t t);
  // Earliest pending tick, or nullopt when idle or exhausted.
  std::optional<int64_t> next_due() const;
  // True once every source of the active session is exhausted.
  bool sources_exhausted() const;

  LiveStatus live_status() const;
  bool recording() const;
  std::optional<std::string> active_session() const;
  model::SessionManifest active_manifest() const;

  // Real-time operation: a thread calling advance_to(clock.now_ms()).
  void start_pacer();
  void stop_pacer();

  void on_chunk_closed(ChunkHook hook) { chunk_hook_ = std::move(hook); }
  void on_session_started(SessionHook hook) { started_hook_ = std::move(hook); }
  void on_session_stopped(SessionHook hook) { stopped_hook_ = std::move(hook); }

  Library& library() { return library_; }

 private:
  struct Cursor {
    std::unique_ptr<StreamSource> source;
    uint64_t next_k = 1;
    std::optional<int64_t> due;
  };
  struct Active;

  void advance_locked(int64_t t);
  void record_locked(model::Stream stream, model::RecordPayload payload);
  model::SessionManifest finish_locked(model::SessionStatus status);
  void pace();

  RecorderOptions options_;
  Clock& clock_;
  DeviceHub& devices_;
  Library library_;
  mutable std::mutex mutex_;
  std::unique_ptr<Active> active_;
  LiveStatus last_;
  ChunkHook chunk_hook_;
  SessionHook started_hook_;
  SessionHook stopped_hook_;

  std::atomic<bool> pacing_{false};
  std::condition_variable wake_;
  std::thread pacer_;
};

}  // namespace mobiscout::recorder
