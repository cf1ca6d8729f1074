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

#include "mobiscout/obd/poller.hpp"

#include <algorithm>
#include <cmath>

namespace mobiscout::obd {

ObdPoller::ObdPoller(ObdClient& client, std::vector<PidSpec> pids, double frequency_hz)
    : client_(client), pids_(std::move(pids)), frequency_hz_(frequency_hz) {
  if (!(frequency_hz_ > 0)) throw Error(Errc::kInvalidArgument, "poll frequency must be positive");
}

ObdPoller::~ObdPoller() { stop(); }

void ObdPoller::start() {
  if (client_.session().state != AdapterState::kConnected)
    throw Error(Errc::kNotConnected, "poll requires a Connected session");
  if (worker_.joinable()) return;
  stop_ = false;
  worker_ = std::thread([this] { run(); });
}

void ObdPoller::stop() {
  stop_ = true;
  if (worker_.joinable()) worker_.join();
  events_.close();
}

void ObdPoller::run() {
  Clock& clock = client_.clock();
  const double period_ms = 1000.0 / frequency_hz_;
  const int64_t t0 = clock.now_ms();
  for (uint64_t cycle = 0; !stop_; ++cycle) {
    const int64_t due = t0 + static_cast<int64_t>(std::llround(cycle * period_ms));
    while (!stop_ && clock.now_ms() < due)
      clock.sleep_for_ms(std::min<int64_t>(due - clock.now_ms(), 20));
    if (stop_) break;

    for (const auto& spec : pids_) {
      if (client_.session().state != AdapterState::kConnected) break;
      try {
        events_.push({PollEvent::Kind::kReading, client_.query(spec), Errc::kNoData, {}});
      } catch (const Error& e) {
        if (e.code() == Errc::kDisconnected || e.code() == Errc::kNotConnected) break;
        events_.push({PollEvent::Kind::kError, std::nullopt, e.code(), e.what()});
      }
    }
    if (client_.session().state != AdapterState::kConnected) {
      events_.push({PollEvent::Kind::kDisconnected, std::nullopt, Errc::kDisconnected,
                    "adapter session ended"});
      events_.close();
      return;
    }
  }
}

}  // namespace mobiscout::obd
