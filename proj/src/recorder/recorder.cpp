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

#include "mobiscout/recorder/recorder.hpp"

#include <algorithm>

#include "mobiscout/common/error.hpp"
#include "mobiscout/common/files.hpp"
#include "mobiscout/model/health.hpp"
#include "mobiscout/model/validation.hpp"

namespace mobiscout::recorder {

using model::Category;
using model::SessionManifest;
using model::SessionStatus;
using model::Stream;

struct Recorder::Active {
  std::string session_id;
  int64_t start_ms = 0;
  model::ConsentProfile consent;
  std::unique_ptr<SessionJournal> journal;
  std::vector<Cursor> cursors;
  std::optional<model::LocationFix> last_fix;
  std::function<obd::AdapterState()> obd_state;
};

namespace {

// Location ticks go first so a motion sample at the same instant sees them.
int stream_priority(Stream s) { return s == Stream::kLocation ? 0 : 1 + static_cast<int>(s); }

}  // namespace

Recorder::Recorder(RecorderOptions options, Clock& clock, DeviceHub& devices)
    : options_(std::move(options)), clock_(clock), devices_(devices), library_(options_.data_dir) {}

Recorder::~Recorder() {
  stop_pacer();
  std::lock_guard lock(mutex_);
  try {
    if (active_) finish_locked(SessionStatus::kFinalized);
  } catch (const std::exception&) {
  }
}

StartResult Recorder::start_session(const model::UserSettings& settings,
                                    const model::ConsentProfile& consent,
                                    const std::vector<Stream>& requested) {
  SessionManifest manifest;
  StartResult result;
  {
    std::lock_guard lock(mutex_);
    if (active_) throw Error(Errc::kAlreadyRecording, "session " + active_->session_id + " is recording");
    const auto settings_report = model::validate_settings(settings);
    if (!settings_report.ok())
      throw Error(Errc::kInvalidArgument, settings_report.errors.front().message);

    std::vector<Stream> streams;
    if (requested.empty()) {
      for (Stream s : model::kAllStreams)
        if (consent.granted(model::category_of(s))) streams.push_back(s);
    } else {
      for (Stream s : model::kAllStreams) {
        if (std::find(requested.begin(), requested.end(), s) == requested.end()) continue;
        if (!consent.granted(model::category_of(s)))
          throw Error(Errc::kConsentDenied, std::string(model::stream_name(s)));
        streams.push_back(s);
      }
    }

    const int64_t start = clock_.now_ms();
    SessionSources sources = devices_.open(settings, streams, start);

    auto active = std::make_unique<Active>();
    active->session_id = files::new_uuid();
    active->start_ms = start;
    active->consent = consent;
    active->obd_state = sources.obd_state;

    manifest.session_id = active->session_id;
    manifest.user_id = options_.user_id;
    manifest.created_at = start;
    manifest.settings = settings;
    manifest.consent = consent;
    manifest.units = model::default_declared_units();
    manifest.status = SessionStatus::kRecording;
    if (consent.granted(Category::kVehicle)) manifest.vehicle = sources.vehicle;
    if (consent.granted(Category::kHealth) && sources.health)
      manifest.health_snapshot = model::summarize_health(*sources.health, start);

    for (auto& src : sources.streams) {
      const Stream s = src->stream();
      if (std::find(streams.begin(), streams.end(), s) == streams.end()) continue;
      if (!manifest.has_stream(s)) manifest.streams.push_back(s);
      Cursor c;
      c.source = std::move(src);
      c.due = c.source->tick_time(1);
      active->cursors.push_back(std::move(c));
    }
    std::sort(manifest.streams.begin(), manifest.streams.end());
    std::stable_sort(active->cursors.begin(), active->cursors.end(),
                     [](const Cursor& a, const Cursor& b) {
                       return stream_priority(a.source->stream()) <
                              stream_priority(b.source->stream());
                     });

    const std::string id = active->session_id;
    active->journal = std::make_unique<SessionJournal>(
        library_.session_dir(id), manifest, options_.journal,
        [this, id](const model::ChunkInfo& info) {
          if (chunk_hook_) chunk_hook_(id, info);
        });

    last_ = LiveStatus{};
    last_.recording = true;
    last_.session_id = id;
    last_.warnings = sources.warnings;
    active_ = std::move(active);
    result.session_id = id;
    result.warnings = sources.warnings;
  }
  wake_.notify_all();
  if (started_hook_) started_hook_(manifest);
  return result;
}

SessionManifest Recorder::stop_session(const std::string& session_id) {
  SessionManifest manifest;
  {
    std::lock_guard lock(mutex_);
    if (!active_ || active_->session_id != session_id)
      throw Error(Errc::kNotRecording, "session " + session_id + " is not recording");
    SessionStatus status = SessionStatus::kFinalized;
    try {
      advance_locked(clock_.now_ms());
    } catch (const Error& e) {
      if (e.code() != Errc::kDiskFull && e.code() != Errc::kIo) throw;
      status = SessionStatus::kFailed;
    }
    manifest = finish_locked(status);
  }
  if (stopped_hook_) stopped_hook_(manifest);
  return manifest;
}

SessionManifest Recorder::finish_locked(SessionStatus status) {
  SessionManifest m = active_->journal->finalize(status);
  active_.reset();
  last_ = LiveStatus{};
  return m;
}

void Recorder::advance_to(int64_t t) {
  std::optional<SessionManifest> failed;
  {
    std::lock_guard lock(mutex_);
    if (!active_) return;
    try {
      advance_locked(t);
    } catch (const Error& e) {
      if (e.code() != Errc::kDiskFull && e.code() != Errc::kIo) throw;
      failed = finish_locked(SessionStatus::kFailed);
    }
  }
  if (failed && stopped_hook_) stopped_hook_(*failed);
}

void Recorder::advance_locked(int64_t t) {
  while (active_) {
    Cursor* next = nullptr;
    for (auto& c : active_->cursors)
      if (c.due && *c.due <= t && (!next || *c.due < *next->due)) next = &c;
    if (!next) return;
    const int64_t due = *next->due;
    const Stream stream = next->source->stream();
    for (auto& payload : next->source->produce(next->next_k, due))
      record_locked(stream, std::move(payload));
    next->next_k += 1;
    next->due = next->source->tick_time(next->next_k);
  }
}

void Recorder::record_locked(Stream stream, model::RecordPayload payload) {
  if (auto* fix = std::get_if<model::LocationFix>(&payload)) active_->last_fix = *fix;
  if (auto* sample = std::get_if<model::SensorSample>(&payload)) {
    if (active_->consent.granted(Category::kLocation) && active_->last_fix) {
      sample->latitude = active_->last_fix->latitude;
      sample->longitude = active_->last_fix->longitude;
      sample->location_accuracy = active_->last_fix->accuracy;
    } else {
      sample->latitude.reset();
      sample->longitude.reset();
      sample->location_accuracy.reset();
    }
    last_.acceleration_z = Timestamped{sample->acceleration_z, sample->t};
  }
  if (auto* heart = std::get_if<model::HeartReading>(&payload))
    last_.heart_rate = Timestamped{heart->bpm, heart->t};
  if (auto* reading = std::get_if<model::VehiclePidReading>(&payload))
    if (reading->mode == 0x01 && reading->pid == 0x0D)
      last_.vehicle_speed = Timestamped{reading->value, reading->t};
  active_->journal->append(stream, payload);
}

std::optional<int64_t> Recorder::next_due() const {
  std::lock_guard lock(mutex_);
  if (!active_) return std::nullopt;
  std::optional<int64_t> best;
  for (const auto& c : active_->cursors)
    if (c.due && (!best || *c.due < *best)) best = c.due;
  return best;
}

bool Recorder::sources_exhausted() const { return recording() && !next_due(); }

LiveStatus Recorder::live_status() const {
  std::lock_guard lock(mutex_);
  LiveStatus s = last_;
  if (active_) {
    s.elapsed_ms = clock_.now_ms() - active_->start_ms;
    if (active_->obd_state) s.obd_state = std::string(obd::adapter_state_name(active_->obd_state()));
  }
  return s;
}

bool Recorder::recording() const {
  std::lock_guard lock(mutex_);
  return active_ != nullptr;
}

std::optional<std::string> Recorder::active_session() const {
  std::lock_guard lock(mutex_);
  if (!active_) return std::nullopt;
  return active_->session_id;
}

SessionManifest Recorder::active_manifest() const {
  std::lock_guard lock(mutex_);
  if (!active_) throw Error(Errc::kNotRecording, "no session is recording");
  return active_->journal->manifest();
}

void Recorder::start_pacer() {
  if (pacing_.exchange(true)) return;
  pacer_ = std::thread([this] { pace(); });
}

void Recorder::stop_pacer() {
  if (!pacing_.exchange(false)) return;
  wake_.notify_all();
  if (pacer_.joinable()) pacer_.join();
}

void Recorder::pace() {
  constexpr int64_t kMaxNapMs = 20;
  while (pacing_) {
    const auto due = next_due();
    if (!due) {
      std::unique_lock lock(mutex_);
      wake_.wait_for(lock, std::chrono::milliseconds(kMaxNapMs));
      continue;
    }
    const int64_t now = clock_.now_ms();
    if (*due > now) {
      clock_.sleep_for_ms(std::min(*due - now, kMaxNapMs));
      continue;
    }
    advance_to(now);
  }
}

}  // namespace mobiscout::recorder
