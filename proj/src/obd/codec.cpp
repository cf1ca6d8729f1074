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

#include "mobiscout/obd/codec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>

#include "mobiscout/common/error.hpp"
#include "mobiscout/obd/transport.hpp"

namespace mobiscout::obd {

namespace {

std::string strip(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string without_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::vector<uint8_t> parse_hex_line(std::string_view line) {
  const std::string compact = without_spaces(line);
  if (compact.empty() || compact.size() % 2 != 0)
    throw Error(Errc::kMalformed, "reply '" + std::string(line) + "' is not a sequence of hex bytes");
  std::vector<uint8_t> bytes;
  for (size_t i = 0; i < compact.size(); i += 2) {
    const int hi = hex_nibble(compact[i]);
    const int lo = hex_nibble(compact[i + 1]);
    if (hi < 0 || lo < 0)
      throw Error(Errc::kMalformed, "reply '" + std::string(line) + "' is not a sequence of hex bytes");
    bytes.push_back(static_cast<uint8_t>((hi << 4) | lo));
  }
  return bytes;
}

void reject_adapter_errors(const std::vector<std::string>& lines) {
  for (const auto& l : lines) {
    const std::string u = upper(l);
    if (u == "NO DATA" || u == "UNABLE TO CONNECT" || u == "STOPPED" || u == "CAN ERROR")
      throw Error(Errc::kNoData, u);
    if (u == "?") throw Error(Errc::kMalformed, "adapter did not understand the command");
  }
}

}  // namespace

std::string encode_request(uint8_t mode, uint8_t pid) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02X%02X\r", mode, pid);
  return buf;
}

std::string format_bytes(const std::vector<uint8_t>& bytes) {
  std::string out;
  char buf[4];
  for (size_t i = 0; i < bytes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%02X", bytes[i]);
    if (i) out.push_back(' ');
    out += buf;
  }
  return out;
}

std::vector<std::string> reply_lines(std::string_view reply, std::string_view command) {
  const std::string echo = upper(without_spaces(command));
  std::vector<std::string> lines;
  std::string current;
  auto flush = [&] {
    std::string l = strip(current);
    current.clear();
    if (l.empty()) return;
    const std::string u = upper(l);
    if (!echo.empty() && upper(without_spaces(l)) == echo) return;
    if (u.rfind("SEARCHING", 0) == 0 || u.rfind("BUS INIT", 0) == 0) return;
    lines.push_back(std::move(l));
  };
  for (char c : reply) {
    if (c == kPrompt) continue;
    if (c == '\r' || c == '\n') {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  return lines;
}

model::VehiclePidReading decode_response(std::string_view reply, const PidSpec& expected,
                                         int64_t t) {
  const auto lines = reply_lines(reply, encode_request(expected.mode, expected.pid));
  reject_adapter_errors(lines);
  if (lines.empty()) throw Error(Errc::kMalformed, "empty reply");

  const auto bytes = parse_hex_line(lines.front());
  if (bytes.size() < 2) throw Error(Errc::kMalformed, "reply too short");
  if (bytes[0] != static_cast<uint8_t>(expected.mode + 0x40) || bytes[1] != expected.pid) {
    throw Error(Errc::kPidMismatch, "expected reply to " + format_bytes({expected.mode, expected.pid}) +
                                        ", got " + format_bytes({bytes[0], bytes[1]}));
  }
  const std::span<const uint8_t> data(bytes.data() + 2, bytes.size() - 2);

  model::VehiclePidReading r;
  r.t = t;
  r.mode = expected.mode;
  r.pid = expected.pid;
  r.value = decode_value(expected, data);
  r.raw.assign(data.begin(), data.begin() + expected.response_bytes);
  r.unit = std::string(expected.unit);
  return r;
}

std::string decode_vin_reply(std::string_view reply) {
  const auto lines = reply_lines(reply, encode_request(0x09, 0x02));
  reject_adapter_errors(lines);
  std::map<int, std::vector<uint8_t>> frames;
  for (const auto& line : lines) {
    const auto bytes = parse_hex_line(line);
    if (bytes.size() < 3 || bytes[0] != 0x49 || bytes[1] != 0x02)
      throw Error(Errc::kPidMismatch, "unexpected line in VIN reply: " + line);
    frames[bytes[2]] = std::vector<uint8_t>(bytes.begin() + 3, bytes.end());
  }
  std::string vin;
  int expected_seq = 1;
  for (const auto& [seq, data] : frames) {
    if (seq != expected_seq++) throw Error(Errc::kMalformed, "VIN reply has a missing frame");
    for (uint8_t b : data)
      if (b != 0) vin.push_back(static_cast<char>(b));
  }
  if (vin.size() != 17)
    throw Error(Errc::kMalformed, "VIN reply carries " + std::to_string(vin.size()) + " characters");
  return vin;
}

std::vector<std::string> format_vin_reply(std::string_view vin) {
  std::vector<uint8_t> data{0, 0, 0};
  for (char c : vin) data.push_back(static_cast<uint8_t>(c));
  std::vector<std::string> lines;
  for (size_t i = 0, seq = 1; i < data.size(); i += 4, ++seq) {
    std::vector<uint8_t> frame{0x49, 0x02, static_cast<uint8_t>(seq)};
    for (size_t k = i; k < std::min(i + 4, data.size()); ++k) frame.push_back(data[k]);
    lines.push_back(format_bytes(frame));
  }
  return lines;
}

bool reading_consistent(const model::VehiclePidReading& reading) {
  const PidSpec* spec = find_pid(reading.mode, reading.pid);
  if (!spec || spec->formula == Formula::kVinAscii) return false;
  if (reading.raw.size() != spec->response_bytes) return false;
  if (reading.unit != spec->unit) return false;
  const double expected = decode_value(*spec, reading.raw);
  return std::abs(expected - reading.value) <= 1e-9 * std::max(1.0, std::abs(expected));
}

model::ValidationReport decode_check(model::Stream, const model::RecordPayload& payload, int64_t index) {
  model::ValidationReport r;
  if (const auto* v = std::get_if<model::VehiclePidReading>(&payload); v && !reading_consistent(*v))
    r.error("OBD_DECODE", "value does not match the raw bytes", "vehicle", index);
  return r;
}

}  // namespace mobiscout::obd
