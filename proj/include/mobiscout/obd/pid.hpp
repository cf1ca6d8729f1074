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

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace mobiscout::obd {

// Decode formulas over the data bytes A, B, C, D of a reply.
enum class Formula {
  kA,          // A
  kAMinus40,   // A - 40
  kPercentA,   // A * 100 / 255
  kRpm,        // (256 A + B) / 4
  kBitmask32,  // (A << 24) | (B << 16) | (C << 8) | D
  kVinAscii,   // multi-line ASCII, see decode_vin_reply
};

struct PidSpec {
  uint8_t mode = 0x01;
  uint8_t pid = 0;
  std::string_view name;
  Formula formula = Formula::kA;
  std::string_view unit;  // canonical unit tag
  uint8_t response_bytes = 1;
  double min_value = 0;  // representable range
  double max_value = 0;

  // Spacing between adjacent representable values.
  double quantization_step() const;
  bool integer_formula() const { return quantization_step() == 1.0; }
};

namespace pids {
inline constexpr PidSpec kSupported{0x01, 0x00, "supported_pids_01_20", Formula::kBitmask32,
                                    "bitmask", 4, 0, 4294967295.0};
inline constexpr PidSpec kEngineLoad{0x01, 0x04, "engine_load", Formula::kPercentA, "%", 1, 0, 100};
inline constexpr PidSpec kCoolantTemp{0x01, 0x05, "coolant_temperature", Formula::kAMinus40, "°C",
                                      1, -40, 215};
inline constexpr PidSpec kEngineRpm{0x01, 0x0C, "engine_rpm", Formula::kRpm, "rpm", 2, 0, 16383.75};
inline constexpr PidSpec kVehicleSpeed{0x01, 0x0D, "vehicle_speed", Formula::kA, "km/h", 1, 0, 255};
inline constexpr PidSpec kThrottle{0x01, 0x11, "throttle_position", Formula::kPercentA, "%", 1, 0,
                                   100};
inline constexpr PidSpec kVin{0x09, 0x02, "vin", Formula::kVinAscii, "", 17, 0, 0};
}  // namespace pids

// Every parameter the client knows how to request.
std::span<const PidSpec> pid_table();
const PidSpec* find_pid(uint8_t mode, uint8_t pid);

// Applies the spec's formula to exactly `spec.response_bytes` data bytes.
// Throws Error(kMalformed) if fewer are given; extra bytes are ignored.
double decode_value(const PidSpec& spec, std::span<const uint8_t> data);

// Inverse of decode_value (nearest representable value, clamped to range).
std::vector<uint8_t> encode_value(const PidSpec& spec, double value);

// Supported-PID bitmask for mode 01 pids 01..20 given the shipped table.
uint32_t supported_pid_mask();

}  // namespace mobiscout::obd
