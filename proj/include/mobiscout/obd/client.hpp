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

#include <chrono>
#include <memory>
#include <string>
#include <string_view>

#include "mobiscout/common/clock.hpp"
#include "mobiscout/model/types.hpp"
#include "mobiscout/obd/pid.hpp"
#include "mobiscout/obd/transport.hpp"

namespace mobiscout::obd {

enum class AdapterState { kDisconnected, kHandshaking, kConnected, kFailed };
std::string_view adapter_state_name(AdapterState s) noexcept;

struct AdapterSession {
  AdapterState state = AdapterState::kDisconnected;
  std::string adapter_id;         // reply to ATZ, e.g. "ELM327 v1.5"
  std::string protocol_selected;  // reply to ATDP
};

struct ObdOptions {
  std::chrono::milliseconds command_timeout{2000};
  int handshake_attempts = 3;
  int64_t retry_spacing_ms = 500;
};

// ELM327-style adapter client. Single owner: every command runs on the
// caller's thread and commands are never interleaved.
class ObdClient {
 public:
  ObdClient(std::unique_ptr<Transport> transport, Clock& clock, ObdOptions options = {});

  // ATZ, ATE0, ATSP0, then probes 01 00. Ends Connected or Failed; never
  // throws. Calling it again on a Connected session re-runs the sequence.
  const AdapterSession& handshake();

  // Requires Connected (Error kNotConnected). Adapter-level failures throw
  // kNoData/kMalformed/kPidMismatch/kTimeout and leave the session Connected;
  // a lost transport throws kDisconnected and moves it to Disconnected.
  model::VehiclePidReading query(const PidSpec& spec);
  model::VehicleInfo read_vin();

  const AdapterSession& session() const { return session_; }
  Clock& clock() { return clock_; }

  // Sends one command line (without CR) and returns the raw reply.
  std::string command(std::string_view line);

 private:
  bool try_handshake();

  std::unique_ptr<Transport> transport_;
  Clock& clock_;
  ObdOptions options_;
  AdapterSession session_;
};

}  // namespace mobiscout::obd
