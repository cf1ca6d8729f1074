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

#include <functional>
#include <memory>
#include <mutex>

#include "mobiscout/common/clock.hpp"
#include "mobiscout/obd/client.hpp"
#include "mobiscout/recorder/recorder.hpp"
#include "mobiscout/sim/scenario.hpp"

namespace mobiscout::app {

using TransportFactory = std::function<std::unique_ptr<obd::Transport>()>;

// Synthetic five-day wearable history ending at `reference_time`, with a day
// of older samples that the health window must drop.
model::RawHealth synthetic_health(uint64_t seed, int64_t reference_time);

// Device hub backed by the scenario engine. Each session replays the
// scenario from t = 0 at its start time; vehicle data is read through an
// ELM327 client on a transport from `obd` (which may be empty).
class SimDeviceHub final : public recorder::DeviceHub {
 public:
  SimDeviceHub(sim::Scenario scenario, Clock& clock, TransportFactory obd,
               obd::ObdOptions obd_options = {});

  recorder::SessionSources open(const model::UserSettings& settings,
                                const std::vector<model::Stream>& streams,
                                int64_t start_ms) override;

  const sim::Scenario& scenario() const { return *scenario_; }

 private:
  std::shared_ptr<const sim::Scenario> scenario_;
  Clock& clock_;
  TransportFactory obd_;
  obd::ObdOptions obd_options_;
};

}  // namespace mobiscout::app
