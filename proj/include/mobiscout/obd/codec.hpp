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
#include <string>
#include <string_view>
#include <vector>

#include "mobiscout/model/types.hpp"
#include "mobiscout/obd/pid.hpp"

namespace mobiscout::obd {

// "010D\r": uppercase hex mode and pid, no spaces, CR-terminated.
std::string encode_request(uint8_t mode, uint8_t pid);

// "41 0D 3C": uppercase hex pairs separated by single spaces.
std::string format_bytes(const std::vector<uint8_t>& bytes);

// Splits a raw adapter reply into its non-empty lines with the '>' prompt,
// echoed command and "SEARCHING..." progress lines removed.
std::vector<std::string> reply_lines(std::string_view reply, std::string_view command = {});

// Decodes a single-frame mode 01 reply. Throws Error with kNoData,
// kMalformed or kPidMismatch.
model::VehiclePidReading decode_response(std::string_view reply, const PidSpec& expected,
                                         int64_t t = 0);

// Mode 09 pid 02: five lines "49 02 0N b1 b2 b3 b4", the first padded with
// three zero bytes. Returns the 17-character VIN.
std::string decode_vin_reply(std::string_view reply);
std::vector<std::string> format_vin_reply(std::string_view vin);

// Checks that a recorded reading's value is what its formula gives for its
// raw bytes (within half a quantisation step).
bool reading_consistent(const model::VehiclePidReading& reading);

// Per-record revalidation hook: OBD_DECODE for inconsistent vehicle readings.
model::ValidationReport decode_check(model::Stream stream, const model::RecordPayload& payload,
                                     int64_t index);

}  // namespace mobiscout::obd
