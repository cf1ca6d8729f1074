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

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "mobiscout/common/clock.hpp"
#include "mobiscout/recorder/recorder.hpp"
#include "mobiscout/sync/engine.hpp"

namespace mobiscout::app {

struct AgentConfig {
  std::filesystem::path data_dir;
  std::string user_id = "local";
  recorder::JournalOptions journal;
  sync::SyncOptions sync;  // data_dir is filled in from the agent's
  bool online = true;
};

// The phone-side agent: recorder, library and sync engine sharing one data
// directory, plus persisted settings and consent. With automatic upload on,
// every new session is streamed live.
class Agent {
 public:
  Agent(AgentConfig config, Clock& clock, recorder::DeviceHub& devices, sync::UploadApi& api);
  ~Agent();
  Agent(const Agent&) = delete;
  Agent& operator=(const Agent&) = delete;

  recorder::Recorder& recorder() { return *recorder_; }
  sync::SyncEngine& sync() { return *sync_; }
  recorder::Library& library() { return recorder_->library(); }

  model::UserSettings settings() const;
  // Throws kInvalidArgument for out-of-range values.
  model::UserSettings set_settings(const model::UserSettings& settings);
  model::ConsentProfile consent() const;
  model::ConsentProfile set_consent(const model::ConsentProfile& consent);

  // Unset arguments fall back to the stored settings and consent.
  recorder::StartResult start_recording(std::optional<model::UserSettings> settings = std::nullopt,
                                        std::optional<model::ConsentProfile> consent = std::nullopt,
                                        const std::vector<model::Stream>& streams = {});
  // Throws kNotRecording.
  model::SessionManifest stop_recording();

  void set_online(bool online);
  bool online() const { return sync_->online(); }

  // Real-time mode: recorder pacing thread and sync workers.
  void start();
  void stop();

 private:
  AgentConfig config_;
  std::unique_ptr<recorder::Recorder> recorder_;
  std::unique_ptr<sync::LibraryStore> store_;
  std::unique_ptr<sync::SyncEngine> sync_;
  mutable std::mutex mutex_;
  model::UserSettings settings_;
  model::ConsentProfile consent_;
};

}  // namespace mobiscout::app
