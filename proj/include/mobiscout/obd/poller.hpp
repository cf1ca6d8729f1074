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
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mobiscout/common/channel.hpp"
#include "mobiscout/common/error.hpp"
#include "mobiscout/obd/client.hpp"

namespace mobiscout::obd {

struct PollEvent {
  enum class Kind { kReading, kError, kDisconnected };
  Kind kind = Kind::kReading;
  std::optional<model::VehiclePidReading> reading;
  Errc error = Errc::kNoData;
  std::string message;
};

// Periodically requests `pids` round-robin at `frequency_hz` cycles per
// second on a worker thread and publishes the results on events(). A failed
// decode yields an error event and polling continues; losing the session
// yields one terminal kDisconnected event and closes the channel.
class ObdPoller {
 public:
  ObdPoller(ObdClient& client, std::vector<PidSpec> pids, double frequency_hz);
  ~ObdPoller();
  ObdPoller(const ObdPoller&) = delete;
  ObdPoller& operator=(const ObdPoller&) = delete;

  // Throws Error(kNotConnected) unless the client session is Connected.
  void start();
  void stop();
  Channel<PollEvent>& events() { return events_; }

 private:
  void run();

  ObdClient& client_;
  std::vector<PidSpec> pids_;
  double frequency_hz_;
  Channel<PollEvent> events_;
  std::atomic<bool> stop_{false};
  std::thread worker_;
};

}  // namespace mobiscout::obd
