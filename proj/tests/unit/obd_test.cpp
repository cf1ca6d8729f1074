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

#include <gtest/gtest.h>

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <map>
#include <random>

#include "mobiscout/common/error.hpp"
#include "mobiscout/obd/braking.hpp"
#include "mobiscout/obd/client.hpp"
#include "mobiscout/obd/codec.hpp"
#include "mobiscout/obd/poller.hpp"
#include "mobiscout/sim/dongle.hpp"

namespace mobiscout::obd {
namespace {

// Hand-written SAE J1979 formulas, kept apart from pid.cpp.
double oracle_decode(uint8_t pid, const std::vector<uint8_t>& d) {
  switch (pid) {
    case 0x04: return d[0] / 2.55;
    case 0x05: return d[0] - 40;
    case 0x0C: return (d[0] * 256 + d[1]) * 0.25;
    case 0x0D: return d[0];
    case 0x11: return d[0] / 2.55;
  }
  ADD_FAILURE() << "no oracle for pid " << int(pid);
  return 0;
}

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::kIo;
}

TEST(EncodeRequest, Examples) {
  EXPECT_EQ(encode_request(0x01, 0x0D), "010D\r");
  EXPECT_EQ(encode_request(0x01, 0x00), "0100\r");
  EXPECT_EQ(encode_request(0x09, 0x02), "0902\r");
  EXPECT_EQ(encode_request(0xAB, 0xCD), "ABCD\r");
}

TEST(DecodeResponse, SpeedAndRpm) {
  EXPECT_DOUBLE_EQ(decode_response("41 0D 3C", pids::kVehicleSpeed).value, 60);
  EXPECT_DOUBLE_EQ(decode_response("41 0C 1A F8", pids::kEngineRpm).value, 1726);
}

TEST(DecodeResponse, ToleratesEchoWhitespaceAndPrompt) {
  auto r = decode_response("010D\r41 0D 3C \r\r>", pids::kVehicleSpeed);
  EXPECT_DOUBLE_EQ(r.value, 60);
  EXPECT_EQ(r.unit, "km/h");
  EXPECT_EQ(decode_response("SEARCHING...\r410D3C\r>", pids::kVehicleSpeed).value, 60);
}

TEST(DecodeResponse, Errors) {
  EXPECT_EQ(error_of([] { decode_response("NO DATA", pids::kVehicleSpeed); }), Errc::kNoData);
  EXPECT_EQ(error_of([] { decode_response("41 0D ZZ", pids::kVehicleSpeed); }), Errc::kMalformed);
  EXPECT_EQ(error_of([] { decode_response("41 0C 1A F8", pids::kVehicleSpeed); }),
            Errc::kPidMismatch);
  EXPECT_EQ(error_of([] { decode_response("41 0C 1A", pids::kEngineRpm); }), Errc::kMalformed);
}

TEST(DecodeResponse, NeverReadsPastResponseBytes) {
  for (const auto& spec : pid_table()) {
    if (spec.formula == Formula::kVinAscii) continue;
    std::vector<uint8_t> bytes{static_cast<uint8_t>(spec.mode + 0x40), spec.pid};
    for (int i = 0; i < spec.response_bytes; ++i) bytes.push_back(0x12);
    const double base = decode_response(format_bytes(bytes), spec).value;
    bytes.push_back(0xFF);
    bytes.push_back(0xEE);
    const auto extended = decode_response(format_bytes(bytes), spec);
    EXPECT_EQ(extended.value, base) << spec.name;
    EXPECT_EQ(extended.raw.size(), spec.response_bytes) << spec.name;
  }
}

TEST(PidCodec, EveryRepresentableValueMatchesOracle) {
  for (uint8_t pid : {0x04, 0x05, 0x0D, 0x11}) {
    const PidSpec& spec = *find_pid(0x01, pid);
    for (int a = 0; a < 256; ++a) {
      const std::vector<uint8_t> data{static_cast<uint8_t>(a)};
      const double truth = oracle_decode(pid, data);
      EXPECT_NEAR(decode_value(spec, data), truth, 1e-12);
      const auto reencoded = encode_value(spec, truth);
      const auto reply = decode_response(format_bytes({0x41, pid, reencoded[0]}), spec);
      if (spec.integer_formula())
        EXPECT_EQ(reply.value, truth);
      else
        EXPECT_LE(std::abs(reply.value - truth), spec.quantization_step());
    }
  }
  for (int raw = 0; raw < 65536; ++raw) {
    const std::vector<uint8_t> data{static_cast<uint8_t>(raw >> 8), static_cast<uint8_t>(raw)};
    const double truth = oracle_decode(0x0C, data);
    ASSERT_EQ(encode_value(pids::kEngineRpm, truth), data);
    ASSERT_NEAR(decode_value(pids::kEngineRpm, data), truth, 1e-12);
  }
}

TEST(PidCodec, SupportedMaskCoversShippedTable) {
  const uint32_t mask = supported_pid_mask();
  for (uint8_t pid : {0x04, 0x05, 0x0C, 0x0D, 0x11})
    EXPECT_TRUE(mask & (1u << (32 - pid))) << int(pid);
  EXPECT_FALSE(mask & (1u << (32 - 0x10)));
}

TEST(VinReply, RoundTrip) {
  const auto lines = format_vin_reply("1HGCM82633A004352");
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "49 02 01 00 00 00 31");
  std::string reply;
  for (const auto& l : lines) reply += l + "\r";
  EXPECT_EQ(decode_vin_reply(reply + ">"), "1HGCM82633A004352");
}

struct Rig {
  sim::Scenario scenario = sim::Scenario::constant(60, 60);
  ManualClock clock{scenario.start_time + 1000};
  std::shared_ptr<sim::DongleEmulator> emulator =
      std::make_shared<sim::DongleEmulator>(scenario, clock);
  ObdClient client{std::make_unique<sim::LoopbackTransport>(emulator), clock};
};

TEST(Handshake, EmulatorConnects) {
  Rig rig;
  const auto& s = rig.client.handshake();
  EXPECT_EQ(s.state, AdapterState::kConnected);
  EXPECT_EQ(s.adapter_id, "ELM327 v1.5");
  EXPECT_FALSE(s.protocol_selected.empty());
}

TEST(Handshake, IsIdempotent) {
  Rig rig;
  const std::string first = rig.client.handshake().adapter_id;
  const auto& again = rig.client.handshake();
  EXPECT_EQ(again.state, AdapterState::kConnected);
  EXPECT_EQ(again.adapter_id, first);
}

TEST(Handshake, NoDataOnProbeFails) {
  Rig rig;
  rig.emulator->set_pids_silent(true);
  EXPECT_EQ(rig.client.handshake().state, AdapterState::kFailed);
}

TEST(Handshake, SilentPeerFailsAfterRetries) {
  const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ASSERT_EQ(::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr), 0);
  ASSERT_EQ(::listen(listener, 1), 0);
  socklen_t len = sizeof addr;
  ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);

  SystemClock clock;
  ObdClient client(std::make_unique<TcpTransport>("127.0.0.1", ntohs(addr.sin_port)), clock);
  const auto start = std::chrono::steady_clock::now();
  EXPECT_EQ(client.handshake().state, AdapterState::kFailed);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_GE(elapsed, 6.0);
  EXPECT_LE(elapsed, 9.0);
  ::close(listener);
}

TEST(Query, RequiresConnected) {
  Rig rig;
  EXPECT_EQ(error_of([&] { rig.client.query(pids::kVehicleSpeed); }), Errc::kNotConnected);
}

TEST(Query, EmulatorSpeedsDecodeExactly) {
  for (int speed = 0; speed < 256; ++speed) {
    sim::Scenario scenario = sim::Scenario::constant(speed, 10);
    ManualClock clock(scenario.start_time + 5000);
    auto emulator = std::make_shared<sim::DongleEmulator>(scenario, clock);
    ObdClient client(std::make_unique<sim::LoopbackTransport>(emulator), clock);
    ASSERT_EQ(client.handshake().state, AdapterState::kConnected);
    EXPECT_EQ(client.query(pids::kVehicleSpeed).value, speed);
    EXPECT_EQ(client.query(pids::kEngineRpm).value,
              std::min(16383.75, std::max(800.0, speed * 60.0)));
  }
}

TEST(Query, UnknownPidIsNoData) {
  Rig rig;
  rig.client.handshake();
  EXPECT_NE(rig.client.command("01FF").find("NO DATA"), std::string::npos);
}

TEST(Query, ReadVin) {
  Rig rig;
  rig.client.handshake();
  const auto info = rig.client.read_vin();
  EXPECT_EQ(info.vin, "1HGCM82633A004352");
  EXPECT_EQ(info.make, "Honda");
  EXPECT_EQ(info.model_year, 2003);
}

std::map<uint8_t, int> poll_counts(double hz, int64_t run_ms, bool* disconnected = nullptr) {
  sim::Scenario scenario = sim::Scenario::constant(50, 600);
  ScaledClock clock(scenario.start_time, 20.0);
  auto emulator = std::make_shared<sim::DongleEmulator>(scenario, clock);
  sim::DongleServer server(emulator, "127.0.0.1", 0);
  ObdClient client(std::make_unique<TcpTransport>("127.0.0.1", server.port()), clock);
  EXPECT_EQ(client.handshake().state, AdapterState::kConnected);

  ObdPoller poller(client, {pids::kVehicleSpeed, pids::kEngineRpm}, hz);
  const int64_t t0 = clock.now_ms();
  poller.start();
  clock.sleep_until_ms(t0 + run_ms);
  if (disconnected) server.stop();
  std::map<uint8_t, int> counts;
  while (auto ev = poller.events().pop_for(std::chrono::milliseconds(disconnected ? 5000 : 0))) {
    if (ev->kind == PollEvent::Kind::kReading) ++counts[ev->reading->pid];
    if (ev->kind == PollEvent::Kind::kDisconnected && disconnected) {
      *disconnected = true;
      EXPECT_EQ(ev->error, Errc::kDisconnected);
      break;
    }
  }
  poller.stop();
  return counts;
}

TEST(Poll, OneHertzForTenSeconds) {
  auto counts = poll_counts(1.0, 9999);
  EXPECT_NEAR(counts[0x0D], 10, 1);
  EXPECT_NEAR(counts[0x0C], 10, 1);
}

TEST(Poll, TenthHertzForTenSeconds) {
  auto counts = poll_counts(0.1, 9999);
  EXPECT_EQ(counts[0x0D], 1);
  EXPECT_EQ(counts[0x0C], 1);
}

TEST(Poll, EmulatorKilledEndsWithDisconnected) {
  bool disconnected = false;
  poll_counts(1.0, 3000, &disconnected);
  EXPECT_TRUE(disconnected);
}

TEST(Poll, RequiresConnected) {
  Rig rig;
  ObdPoller poller(rig.client, {pids::kVehicleSpeed}, 1.0);
  EXPECT_EQ(error_of([&] { poller.start(); }), Errc::kNotConnected);
}

std::vector<SpeedPoint> linear(double from, double to, int64_t ms, int64_t step = 100) {
  std::vector<SpeedPoint> out;
  for (int64_t t = 0; t <= ms; t += step) out.push_back({t, from + (to - from) * t / double(ms)});
  return out;
}

TEST(Braking, ConstantSpeedHasNoEvents) {
  EXPECT_TRUE(detect_braking(linear(50, 50, 10000)).empty());
}

TEST(Braking, HardStop) {
  auto events = detect_braking(linear(100, 0, 4000));
  ASSERT_EQ(events.size(), 1u);
  EXPECT_NEAR(events[0].peak_decel, 100 / 3.6 / 4 / 9.80665, 1e-9);
  EXPECT_NEAR(events[0].peak_decel, 0.71, 0.02);
  EXPECT_EQ(events[0].t_start, 0);
  EXPECT_EQ(events[0].t_end, 4000);
}

TEST(Braking, GentleSlowdownIgnored) {
  // 0.1 g for 5 s is about 17.65 km/h.
  EXPECT_TRUE(detect_braking(linear(60, 60 - 0.1 * 9.80665 * 3.6 * 5, 5000)).empty());
}

TEST(Braking, ShortSpikeIgnored) {
  std::vector<SpeedPoint> s{{0, 50}, {200, 45}, {400, 45}};
  EXPECT_TRUE(detect_braking(s).empty());
}

TEST(Braking, EventsDisjointOrderedAndAboveThreshold) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dv(-12, 6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SpeedPoint> s;
    double v = 80;
    for (int64_t t = 0; t < 60000; t += 250) {
      s.push_back({t, v});
      v = std::max(0.0, v + dv(rng));
    }
    const auto events = detect_braking(s);
    for (size_t i = 0; i < events.size(); ++i) {
      EXPECT_GT(events[i].t_end, events[i].t_start);
      EXPECT_GE(events[i].t_end - events[i].t_start, kBrakingMinDurationMs);
      EXPECT_GE(events[i].peak_decel, kBrakingThresholdG);
      if (i > 0) {
        EXPECT_GE(events[i].t_start, events[i - 1].t_end);
      }
    }
  }
}

}  // namespace
}  // namespace mobiscout::obd
