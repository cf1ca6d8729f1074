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

#include "mobiscout/obd/pid.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mobiscout/common/error.hpp"

namespace mobiscout::obd {

namespace {

constexpr std::array<PidSpec, 7> kTable{pids::kSupported, pids::kEngineLoad, pids::kCoolantTemp,
                                        pids::kEngineRpm, pids::kVehicleSpeed, pids::kThrottle,
                                        pids::kVin};

uint32_t clamp_round(double v, double lo, double hi) {
  return static_cast<uint32_t>(std::llround(std::clamp(v, lo, hi)));
}

}  // namespace

double PidSpec::quantization_step() const {
  switch (formula) {
    case Formula::kPercentA: return 100.0 / 255.0;
    case Formula::kRpm: return 0.25;
    default: return 1.0;
  }
}

std::span<const PidSpec> pid_table() { return kTable; }

const PidSpec* find_pid(uint8_t mode, uint8_t pid) {
  for (const auto& spec : kTable)
    if (spec.mode == mode && spec.pid == pid) return &spec;
  return nullptr;
}

double decode_value(const PidSpec& spec, std::span<const uint8_t> data) {
  if (data.size() < spec.response_bytes)
    throw Error(Errc::kMalformed, std::string(spec.name) + " needs " +
                                      std::to_string(spec.response_bytes) + " data bytes, got " +
                                      std::to_string(data.size()));
  const auto d = data.first(spec.response_bytes);
  switch (spec.formula) {
    case Formula::kA: return d[0];
    case Formula::kAMinus40: return static_cast<double>(d[0]) - 40.0;
    case Formula::kPercentA: return d[0] * 100.0 / 255.0;
    case Formula::kRpm: return (256.0 * d[0] + d[1]) / 4.0;
    case Formula::kBitmask32:
      return static_cast<double>((uint32_t{d[0]} << 24) | (uint32_t{d[1]} << 16) |
                                 (uint32_t{d[2]} << 8) | uint32_t{d[3]});
    case Formula::kVinAscii:
      throw Error(Errc::kInvalidArgument, "VIN is not a numeric parameter");
  }
  throw Error(Errc::kInvalidArgument, "unknown formula");
}

std::vector<uint8_t> encode_value(const PidSpec& spec, double value) {
  switch (spec.formula) {
    case Formula::kA: return {static_cast<uint8_t>(clamp_round(value, 0, 255))};
    case Formula::kAMinus40: return {static_cast<uint8_t>(clamp_round(value + 40.0, 0, 255))};
    case Formula::kPercentA:
      return {static_cast<uint8_t>(clamp_round(value * 255.0 / 100.0, 0, 255))};
    case Formula::kRpm: {
      const uint32_t raw = clamp_round(value * 4.0, 0, 65535);
      return {static_cast<uint8_t>(raw >> 8), static_cast<uint8_t>(raw & 0xff)};
    }
    case Formula::kBitmask32: {
      const uint32_t raw = clamp_round(value, 0, 4294967295.0);
      return {static_cast<uint8_t>(raw >> 24), static_cast<uint8_t>(raw >> 16),
              static_cast<uint8_t>(raw >> 8), static_cast<uint8_t>(raw)};
    }
    case Formula::kVinAscii:
      throw Error(Errc::kInvalidArgument, "VIN is not a numeric parameter");
  }
  throw Error(Errc::kInvalidArgument, "unknown formula");
}

uint32_t supported_pid_mask() {
  uint32_t mask = 0;
  for (const auto& spec : kTable)
    if (spec.mode == 0x01 && spec.pid >= 0x01 && spec.pid <= 0x20)
      mask |= 1u << (32 - spec.pid);
  return mask;
}

}  // namespace mobiscout::obd
