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

#include "mobiscout/sim/dongle.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>

#include "mobiscout/common/error.hpp"
#include "mobiscout/obd/codec.hpp"
#include "mobiscout/obd/pid.hpp"
#include "mobiscout/sim/truth.hpp"

namespace mobiscout::sim {

namespace {

constexpr std::string_view kProtocol = "AUTO, ISO 15765-4 (CAN 11/500)";
constexpr double kIdleRpm = 800;

std::string normalize(std::string_view command) {
  std::string out;
  for (char c : command)
    if (!std::isspace(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return out;
}

bool parse_hex_byte(std::string_view s, uint8_t& out) {
  if (s.size() != 2 || !std::isxdigit(static_cast<unsigned char>(s[0])) ||
      !std::isxdigit(static_cast<unsigned char>(s[1])))
    return false;
  out = static_cast<uint8_t>(std::stoi(std::string(s), nullptr, 16));
  return true;
}

}  // namespace

DongleEmulator::DongleEmulator(const Scenario& scenario, const Clock& clock)
    : scenario_(scenario), clock_(clock) {}

double DongleEmulator::speed_now() const {
  const int64_t t = std::clamp<int64_t>(clock_.now_ms() - scenario_.start_time, 0,
                                        scenario_.duration_ms());
  return sample_truth(scenario_, t).speed;
}

std::string DongleEmulator::respond(std::string_view command) {
  std::lock_guard lock(mutex_);
  std::string out;
  if (echo_) out.append(command).push_back('\r');
  out += reply_for(command);
  out.push_back('\r');
  out.push_back(obd::kPrompt);
  return out;
}

std::string DongleEmulator::reply_for(std::string_view raw) {
  const std::string cmd = normalize(raw);
  if (cmd.empty()) return "?";
  if (cmd.rfind("AT", 0) == 0) {
    const std::string at = cmd.substr(2);
    if (at == "Z" || at == "WS") {
      echo_ = true;
      return std::string(kDongleBanner);
    }
    if (at == "I") return std::string(kDongleBanner);
    if (at == "E0" || at == "E1") {
      echo_ = at == "E1";
      return "OK";
    }
    if (at == "DP") return std::string(kProtocol);
    if (at.rfind("SP", 0) == 0 || at == "L0" || at == "L1" || at == "S0" || at == "S1" ||
        at == "H0" || at == "H1" || at == "D")
      return "OK";
    return "?";
  }

  uint8_t mode = 0, pid = 0;
  if (cmd.size() != 4 || !parse_hex_byte(std::string_view(cmd).substr(0, 2), mode) ||
      !parse_hex_byte(std::string_view(cmd).substr(2, 2), pid))
    return "?";
  if (pids_silent_) return "NO DATA";

  if (mode == 0x09 && pid == 0x02) {
    std::string lines;
    for (const auto& l : obd::format_vin_reply(scenario_.vin)) {
      if (!lines.empty()) lines.push_back('\r');
      lines += l;
    }
    return lines;
  }
  if (mode != 0x01) return "NO DATA";

  const double speed = speed_now();
  std::vector<uint8_t> data;
  switch (pid) {
    case 0x00: {
      const uint32_t mask = obd::supported_pid_mask();
      data = {static_cast<uint8_t>(mask >> 24), static_cast<uint8_t>(mask >> 16),
              static_cast<uint8_t>(mask >> 8), static_cast<uint8_t>(mask)};
      break;
    }
    case 0x04: data = obd::encode_value(obd::pids::kEngineLoad, 20 + 0.4 * speed); break;
    case 0x05: data = obd::encode_value(obd::pids::kCoolantTemp, 90); break;
    case 0x0C:
      data = obd::encode_value(obd::pids::kEngineRpm, std::max(kIdleRpm, speed * 60));
      break;
    case 0x0D: data = obd::encode_value(obd::pids::kVehicleSpeed, speed); break;
    case 0x11: data = obd::encode_value(obd::pids::kThrottle, 15 + 0.3 * speed); break;
    default: return "NO DATA";
  }
  data.insert(data.begin(), {static_cast<uint8_t>(0x41), pid});
  return obd::format_bytes(data);
}

LoopbackTransport::LoopbackTransport(std::shared_ptr<DongleEmulator> emulator)
    : emulator_(std::move(emulator)) {}

void LoopbackTransport::send(std::string_view bytes) {
  if (closed_ || emulator_->unplugged()) throw Error(Errc::kDisconnected, "adapter unplugged");
  for (char c : bytes) {
    if (c == '\r') {
      output_ += emulator_->respond(line_);
      line_.clear();
    } else if (c != '\n') {
      line_.push_back(c);
    }
  }
}

std::optional<std::string> LoopbackTransport::read_reply(std::chrono::milliseconds) {
  if (closed_ || emulator_->unplugged()) throw Error(Errc::kDisconnected, "adapter unplugged");
  const auto pos = output_.find(obd::kPrompt);
  if (pos == std::string::npos) return std::nullopt;
  std::string reply = output_.substr(0, pos + 1);
  output_.erase(0, pos + 1);
  return reply;
}

void LoopbackTransport::close() { closed_ = true; }

DongleServer::DongleServer(std::shared_ptr<DongleEmulator> emulator, const std::string& host,
                           uint16_t port)
    : emulator_(std::move(emulator)), host_(host) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res) != 0 ||
      res == nullptr)
    throw Error(Errc::kBindFailure, "cannot resolve " + host);
  listen_fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  const int one = 1;
  if (listen_fd_ >= 0) ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  const bool ok = listen_fd_ >= 0 && ::bind(listen_fd_, res->ai_addr, res->ai_addrlen) == 0 &&
                  ::listen(listen_fd_, 4) == 0;
  ::freeaddrinfo(res);
  if (!ok) {
    const std::string why = std::strerror(errno);
    if (listen_fd_ >= 0) ::close(listen_fd_);
    throw Error(Errc::kBindFailure, "cannot listen on " + host + ":" + service + ": " + why);
  }
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  worker_ = std::thread([this] { serve(); });
}

DongleServer::~DongleServer() { stop(); }

std::string DongleServer::endpoint() const {
  return (host_.empty() ? std::string("127.0.0.1") : host_) + ":" + std::to_string(port_);
}

void DongleServer::stop() {
  if (stopping_.exchange(true)) return;
  const int client = client_fd_.exchange(-1);
  if (client >= 0) {
    ::shutdown(client, SHUT_RDWR);
    ::close(client);
  }
  ::shutdown(listen_fd_, SHUT_RDWR);
  if (worker_.joinable()) worker_.join();
  ::close(listen_fd_);
}

void DongleServer::serve() {
  while (!stopping_) {
    pollfd lp{listen_fd_, POLLIN, 0};
    if (::poll(&lp, 1, 50) <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    client_fd_ = fd;
    std::string line;
    char buf[256];
    while (!stopping_) {
      pollfd cp{fd, POLLIN, 0};
      const int rc = ::poll(&cp, 1, 50);
      if (rc == 0) continue;
      if (rc < 0 && errno == EINTR) continue;
      const ssize_t n = rc < 0 ? -1 : ::recv(fd, buf, sizeof buf, 0);
      if (n <= 0 || emulator_->unplugged()) break;
      for (ssize_t i = 0; i < n; ++i) {
        if (buf[i] == '\r') {
          const std::string reply = emulator_->respond(line);
          line.clear();
          ::send(fd, reply.data(), reply.size(), MSG_NOSIGNAL);
        } else if (buf[i] != '\n') {
          line.push_back(buf[i]);
        }
      }
    }
    if (client_fd_.exchange(-1) == fd) ::close(fd);
  }
}

}  // namespace mobiscout::sim
