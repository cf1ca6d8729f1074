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

namespace mobiscout::model {

enum class Unit {
  kKilometersPerHour,
  kMilesPerHour,
  kMeter,
  kFoot,
  kKilometer,
  kMile,
  kCelsius,
  kFahrenheit,
  kG,
  kRadiansPerSecond,
  kRadian,
  kDegree,
  kBeatsPerMinute,
  kDecibelA,
  kRpm,
  kPercent,
  kCount,
  kMillisecond,
};

// Tags as they appear in records and manifests ("km/h", "°C", ...).
std::string_view unit_tag(Unit unit) noexcept;
std::optional<Unit> parse_unit(std::string_view tag) noexcept;

// The unit every quantity of the same dimension is standardised to.
Unit canonical_unit(Unit unit) noexcept;
inline bool is_canonical(Unit unit) noexcept { return canonical_unit(unit) == unit; }
bool is_canonical_tag(std::string_view tag) noexcept;

// Exact conversion between supported pairs (mph/km/h, ft/m, mi/km, °F/°C) and
// any unit to itself. Throws Error(kUnsupportedPair) otherwise.
double convert_unit(double value, Unit from, Unit to);

// Converts into the canonical unit of `from`'s dimension.
double standardize(double value, Unit from);

}  // namespace mobiscout::model
