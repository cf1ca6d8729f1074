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

#include "mobiscout/model/vin.hpp"

#include <array>
#include <cctype>
#include <utility>

#include "mobiscout/common/error.hpp"

namespace mobiscout::model {

namespace {

constexpr std::array<int, 17> kWeights{8, 7, 6, 5, 4, 3, 2, 10, 0, 9, 8, 7, 6, 5, 4, 3, 2};

int transliterate(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  switch (c) {
    case 'A': case 'J': return 1;
    case 'B': case 'K': case 'S': return 2;
    case 'C': case 'L': case 'T': return 3;
    case 'D': case 'M': case 'U': return 4;
    case 'E': case 'N': case 'V': return 5;
    case 'F': case 'W': return 6;
    case 'G': case 'P': case 'X': return 7;
    case 'H': case 'Y': return 8;
    case 'R': case 'Z': return 9;
    default: return -1;  // I, O, Q and anything outside [0-9A-Z]
  }
}

constexpr std::pair<std::string_view, std::string_view> kManufacturers[] = {
    {"1HG", "Honda"},     {"JHM", "Honda"},      {"2HG", "Honda"},
    {"1G1", "Chevrolet"}, {"1GC", "Chevrolet"},  {"1FA", "Ford"},
    {"1FT", "Ford"},      {"3FA", "Ford"},       {"4T1", "Toyota"},
    {"5YJ", "Tesla"},     {"WBA", "BMW"},        {"WVW", "Volkswagen"},
    {"1M8", "Motor Coach Industries"},           {"JT", "Toyota"},
    {"JN", "Nissan"},     {"KM", "Hyundai"},     {"WD", "Mercedes-Benz"},
};

constexpr std::string_view kYearCodes = "ABCDEFGHJKLMNPRSTVWXY123456789";

}  // namespace

std::optional<char> vin_check_digit(std::string_view vin) {
  if (vin.size() != 17) return std::nullopt;
  int sum = 0;
  for (size_t i = 0; i < 17; ++i) {
    const int v = transliterate(vin[i]);
    if (v < 0) return std::nullopt;
    sum += v * kWeights[i];
  }
  const int rem = sum % 11;
  return rem == 10 ? 'X' : static_cast<char>('0' + rem);
}

bool is_valid_vin(std::string_view vin) {
  const auto check = vin_check_digit(vin);
  return check && vin[8] == *check;
}

std::string with_check_digit(std::string vin) {
  if (vin.size() != 17) throw Error(Errc::kInvalidArgument, "VIN must have 17 characters");
  vin[8] = '0';
  const auto check = vin_check_digit(vin);
  if (!check) throw Error(Errc::kInvalidArgument, "VIN contains invalid characters");
  vin[8] = *check;
  return vin;
}

VehicleInfo decode_vin(std::string_view vin) {
  if (!is_valid_vin(vin)) throw Error(Errc::kInvalidArgument, "invalid VIN '" + std::string(vin) + "'");
  VehicleInfo info;
  info.vin = std::string(vin);
  for (const auto& [wmi, make] : kManufacturers) {
    if (vin.substr(0, wmi.size()) == wmi) {
      info.make = std::string(make);
      break;
    }
  }
  const auto pos = kYearCodes.find(vin[9]);
  if (pos != std::string_view::npos) {
    // Position 7 alphabetic marks the 2010-2039 cycle.
    const bool later_cycle = std::isalpha(static_cast<unsigned char>(vin[6])) != 0;
    info.model_year = 1980 + static_cast<int>(pos) + (later_cycle ? 30 : 0);
  }
  return info;
}

}  // namespace mobiscout::model
