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

#include <optional>
#include <string>
#include <string_view>

#include "mobiscout/model/types.hpp"

namespace mobiscout::model {

// Check digit (position 9) of a 17-character VIN, '0'-'9' or 'X'.
std::optional<char> vin_check_digit(std::string_view vin);

// Length 17, no I/O/Q, valid transliteration and matching check digit.
bool is_valid_vin(std::string_view vin);

// Decodes what the VIN itself determines: manufacturer from the WMI and model
// year from position 10. `model` stays empty; it is not encoded in a VIN in a
// manufacturer-independent way. Throws Error(kInvalidArgument) on bad VINs.
VehicleInfo decode_vin(std::string_view vin);

// Replaces position 9 with the correct check digit (used by the simulator to
// fabricate valid VINs).
std::string with_check_digit(std::string vin);

}  // namespace mobiscout::model
