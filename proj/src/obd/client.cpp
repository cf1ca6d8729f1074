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

#include "mobiscout/obd/client.hpp"

#include "mobiscout/common/error.hpp"
#include "mobiscout/model/vin.hpp"
#include "mobiscout/obd/codec.hpp"

namespace mobiscout::obd {

std::string_view adapter_state_name(AdapterState s) noexcept {
  switch (s) {
    case AdapterState::kDisconnected: return "Disconnected";
    case AdapterState::kHandshaking: return "Handshaking";
    case AdapterState::kConnected: return "Connected";
    case AdapterState::kFailed: return "Failed";
  }
  return "?";
}

ObdClient::ObdClient(std::unique_ptr<Transport> transport, Clock& clock, ObdOptions options)
    : transport_(std::move(transport)), clock_(clock), options_(options) {}

std::string ObdClient::command(std::string_view line) {
  if (!transport_) throw Error(Errc::kDisconnected, "no transport");
  std::string wire(line);
  wire.push_back('\r');
  try {
    transport_->send(wire);
    auto reply = transport_->read_reply(options_.command_timeout);
    if (!reply) throw Error(Errc::kTimeout, "no reply to '" + std::string(line) + "'");
    return *reply;
  } catch (const Error& e) {
    if (e.code() == Errc::kDisconnected) session_.state = AdapterState::kDisconnected;
    throw;
  }
}

bool ObdClient::try_handshake() {
  const auto reset = reply_lines(command("ATZ"), "ATZ");
  std::string id;
  for (const auto& l : reset)
    if (l.find("ELM") != std::string::npos) id = l;
  if (id.empty() && !reset.empty()) id = reset.back();
  if (id.empty()) return false;

  for (const char* cmd : {"ATE0", "ATSP0"}) {
    const auto lines = reply_lines(command(cmd), cmd);
    if (lines.empty() || lines.back() != "OK") return false;
  }
  decode_response(command("0100"), pids::kSupported);

  session_.adapter_id = id;
  session_.protocol_selected = "AUTO";
  try {
    const auto dp = reply_lines(command("ATDP"), "ATDP");
    if (!dp.empty() && dp.back() != "?") session_.protocol_selected = dp.back();
  } catch (const Error& e) {
    if (e.code() == Errc::kDisconnected) throw;
  }
  return true;
}

const AdapterSession& ObdClient::handshake() {
  session_.state = AdapterState::kHandshaking;
  for (int attempt = 0; attempt < options_.handshake_attempts; ++attempt) {
    if (attempt > 0) clock_.sleep_for_ms(options_.retry_spacing_ms);
    try {
      if (try_handshake()) {
        session_.state = AdapterState::kConnected;
        return session_;
      }
    } catch (const Error& e) {
      if (e.code() == Errc::kDisconnected) break;
    } catch (const std::exception&) {
    }
  }
  session_.state = AdapterState::kFailed;
  return session_;
}

model::VehiclePidReading ObdClient::query(const PidSpec& spec) {
  if (session_.state != AdapterState::kConnected)
    throw Error(Errc::kNotConnected, "adapter session is " +
                                         std::string(adapter_state_name(session_.state)));
  const auto line = encode_request(spec.mode, spec.pid);
  const auto reply = command(std::string_view(line).substr(0, line.size() - 1));
  return decode_response(reply, spec, clock_.now_ms());
}

model::VehicleInfo ObdClient::read_vin() {
  if (session_.state != AdapterState::kConnected)
    throw Error(Errc::kNotConnected, "adapter session is " +
                                         std::string(adapter_state_name(session_.state)));
  const std::string vin = decode_vin_reply(command("0902"));
  if (!model::is_valid_vin(vin)) {
    model::VehicleInfo info;
    info.vin = vin;
    return info;
  }
  return model::decode_vin(vin);
}

}  // namespace mobiscout::obd
