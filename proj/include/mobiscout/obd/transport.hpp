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
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace mobiscout::obd {

inline constexpr char kPrompt = '>';

// Duplex byte stream to an adapter. Implementations must be usable from one
// thread at a time; the client serialises all commands.
class Transport {
 public:
  virtual ~Transport() = default;
  // Throws Error(kDisconnected) when the peer is gone.
  virtual void send(std::string_view bytes) = 0;
  // Returns everything up to and including the next '>' prompt, or nullopt
  // if none arrives within `timeout`. Throws Error(kDisconnected) on EOF.
  virtual std::optional<std::string> read_reply(std::chrono::milliseconds timeout) = 0;
  virtual void close() = 0;
};

// TCP client used to reach the dongle emulator (or a WiFi ELM327 adapter).
class TcpTransport final : public Transport {
 public:
  // Throws Error(kDisconnected) if the connection cannot be established.
  TcpTransport(const std::string& host, uint16_t port);
  ~TcpTransport() override;
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  void send(std::string_view bytes) override;
  std::optional<std::string> read_reply(std::chrono::milliseconds timeout) override;
  void close() override;

 private:
  int fd_ = -1;
  std::string pending_;
};

// Parses "HOST:PORT".
std::pair<std::string, uint16_t> parse_endpoint(std::string_view endpoint);

}  // namespace mobiscout::obd
