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
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include "mobiscout/common/clock.hpp"
#include "mobiscout/obd/transport.hpp"
#include "mobiscout/sim/scenario.hpp"

namespace mobiscout::sim {

inline constexpr std::string_view kDongleBanner = "ELM327 v1.5";

// Line-level ELM327 emulator. Vehicle replies encode the scenario truth at
// the clock's current time.
class DongleEmulator {
 public:
  DongleEmulator(const Scenario& scenario, const Clock& clock);

  // Takes one command without its CR and returns the full reply, including
  // echo (when on) and the trailing prompt.
  std::string respond(std::string_view command);

  // Fault injection: answer AT commands but reply NO DATA to every PID.
  void set_pids_silent(bool silent) { pids_silent_ = silent; }
  // Fault injection: drop the link; transports report DISCONNECTED.
  void set_unplugged(bool unplugged) { unplugged_ = unplugged; }
  bool unplugged() const { return unplugged_; }

  double speed_now() const;

 private:
  std::string reply_for(std::string_view command);

  const Scenario& scenario_;
  const Clock& clock_;
  std::mutex mutex_;
  bool echo_ = true;
  std::atomic<bool> pids_silent_{false};
  std::atomic<bool> unplugged_{false};
};

// In-process transport wired straight to an emulator.
class LoopbackTransport final : public obd::Transport {
 public:
  explicit LoopbackTransport(std::shared_ptr<DongleEmulator> emulator);

  void send(std::string_view bytes) override;
  std::optional<std::string> read_reply(std::chrono::milliseconds timeout) override;
  void close() override;

 private:
  std::shared_ptr<DongleEmulator> emulator_;
  std::string line_;
  std::string output_;
  bool closed_ = false;
};

// Serves the emulator over TCP, one client connection at a time.
class DongleServer {
 public:
  // Port 0 picks a free port. Throws Error(kBindFailure).
  DongleServer(std::shared_ptr<DongleEmulator> emulator, const std::string& host, uint16_t port);
  ~DongleServer();
  DongleServer(const DongleServer&) = delete;
  DongleServer& operator=(const DongleServer&) = delete;

  uint16_t port() const { return port_; }
  std::string endpoint() const;
  // Closes the listener and any connected client.
  void stop();

 private:
  void serve();

  std::shared_ptr<DongleEmulator> emulator_;
  std::string host_;
  uint16_t port_ = 0;
  int listen_fd_ = -1;
  std::atomic<int> client_fd_{-1};
  std::atomic<bool> stopping_{false};
  std::thread worker_;
};

}  // namespace mobiscout::sim
