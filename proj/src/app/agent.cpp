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

#include "mobiscout/app/agent.hpp"

#include "mobiscout/common/error.hpp"
#include "mobiscout/common/files.hpp"
#include "mobiscout/model/serialize.hpp"
#include "mobiscout/model/validation.hpp"

namespace mobiscout::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
T load_or(const fs::path& path, T fallback) {
  if (!fs::exists(path)) return fallback;
  json j = json::parse(files::read_all(path), nullptr, false);
  if (j.is_discarded()) return fallback;
  return j.get<T>();
}

}  // namespace

Agent::Agent(AgentConfig config, Clock& clock, recorder::DeviceHub& devices, sync::UploadApi& api)
    : config_(std::move(config)) {
  fs::create_directories(config_.data_dir);
  settings_ = load_or(config_.data_dir / "settings.json", model::UserSettings{});
  consent_ = load_or(config_.data_dir / "consent.json", model::ConsentProfile::all_granted());

  recorder_ = std::make_unique<recorder::Recorder>(
      recorder::RecorderOptions{config_.data_dir, config_.user_id, config_.journal}, clock, devices);
  recorder_->library().recover_all();
  store_ = std::make_unique<sync::LibraryStore>(recorder_->library());
  auto sync_options = config_.sync;
  sync_options.data_dir = config_.data_dir;
  sync_ = std::make_unique<sync::SyncEngine>(sync_options, *store_, api, clock, config_.online);

  recorder_->on_session_started([this](const model::SessionManifest& m) {
    if (m.settings.automatic_upload) sync_->enqueue(m.session_id, sync::UploadMode::kLive);
  });
  recorder_->on_chunk_closed([this](const std::string&, const model::ChunkInfo&) { sync_->wake(); });
  recorder_->on_session_stopped([this](const model::SessionManifest&) { sync_->wake(); });
}

Agent::~Agent() { stop(); }

model::UserSettings Agent::settings() const {
  std::lock_guard lock(mutex_);
  return settings_;
}

model::UserSettings Agent::set_settings(const model::UserSettings& settings) {
  const auto report = model::validate_settings(settings);
  if (!report.ok()) throw Error(Errc::kInvalidArgument, report.errors.front().message);
  std::lock_guard lock(mutex_);
  files::write_atomic(config_.data_dir / "settings.json", json(settings).dump(2));
  settings_ = settings;
  return settings_;
}

model::ConsentProfile Agent::consent() const {
  std::lock_guard lock(mutex_);
  return consent_;
}

model::ConsentProfile Agent::set_consent(const model::ConsentProfile& consent) {
  std::lock_guard lock(mutex_);
  files::write_atomic(config_.data_dir / "consent.json", json(consent).dump(2));
  consent_ = consent;
  return consent_;
}

recorder::StartResult Agent::start_recording(std::optional<model::UserSettings> settings,
                                             std::optional<model::ConsentProfile> consent,
                                             const std::vector<model::Stream>& streams) {
  return recorder_->start_session(settings.value_or(this->settings()), consent.value_or(this->consent()),
                                  streams);
}

model::SessionManifest Agent::stop_recording() {
  const auto id = recorder_->active_session();
  if (!id) throw Error(Errc::kNotRecording, "no session is recording");
  return recorder_->stop_session(*id);
}

void Agent::set_online(bool online) { sync_->on_connectivity(online); }

void Agent::start() {
  recorder_->start_pacer();
  sync_->start();
}

void Agent::stop() {
  if (recorder_) recorder_->stop_pacer();
  if (sync_) sync_->stop();
}

}  // namespace mobiscout::app
