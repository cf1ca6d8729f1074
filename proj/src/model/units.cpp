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

#include "mobiscout/model/units.hpp"

#include <array>
#include <utility>

#include "mobiscout/common/error.hpp"

namespace mobiscout::model {

namespace {

constexpr double kKmPerMile = 1.609344;
constexpr double kMetersPerFoot = 0.3048;

struct TagEntry {
  Unit unit;
  std::string_view tag;
};

constexpr std::array<TagEntry, 18> kTags{{
    {Unit::kKilometersPerHour, "km/h"},
    {Unit::kMilesPerHour, "mph"},
    {Unit::kMeter, "m"},
    {Unit::kFoot, "ft"},
    {Unit::kKilometer, "km"},
    {Unit::kMile, "mi"},
    {Unit::kCelsius, "°C"},
    {Unit::kFahrenheit, "°F"},
    {Unit::kG, "g"},
    {Unit::kRadiansPerSecond, "rad/s"},
    {Unit::kRadian, "rad"},
    {Unit::kDegree, "deg"},
    {Unit::kBeatsPerMinute, "bpm"},
    {Unit::kDecibelA, "dB(A)"},
    {Unit::kRpm, "rpm"},
    {Unit::kPercent, "%"},
    {Unit::kCount, "count"},
    {Unit::kMillisecond, "ms"},
}};

}  // namespace

std::string_view unit_tag(Unit unit) noexcept {
  for (const auto& e : kTags)
    if (e.unit == unit) return e.tag;
  return "?";
}

std::optional<Unit> parse_unit(std::string_view tag) noexcept {
  for (const auto& e : kTags)
    if (e.tag == tag) return e.unit;
  // ASCII spellings of the temperature tags.
  if (tag == "degC" || tag == "C") return Unit::kCelsius;
  if (tag == "degF" || tag == "F") return Unit::kFahrenheit;
  return std::nullopt;
}

Unit canonical_unit(Unit unit) noexcept {
  switch (unit) {
    case Unit::kMilesPerHour: return Unit::kKilometersPerHour;
    case Unit::kFoot: return Unit::kMeter;
    case Unit::kKilometer: return Unit::kMeter;
    case Unit::kMile: return Unit::kMeter;
    case Unit::kFahrenheit: return Unit::kCelsius;
    default: return unit;
  }
}

bool is_canonical_tag(std::string_view tag) noexcept {
  // Only the exact canonical spelling counts; "degC" is accepted on input but
  // a standardised record must carry "°C".
  for (const auto& e : kTags)
    if (e.tag == tag) return is_canonical(e.unit);
  return false;
}

double convert_unit(double value, Unit from, Unit to) {
  if (from == to) return value;
  using P = std::pair<Unit, Unit>;
  const P pair{from, to};
  if (pair == P{Unit::kMilesPerHour, Unit::kKilometersPerHour}) return value * kKmPerMile;
  if (pair == P{Unit::kKilometersPerHour, Unit::kMilesPerHour}) return value / kKmPerMile;
  if (pair == P{Unit::kMile, Unit::kKilometer}) return value * kKmPerMile;
  if (pair == P{Unit::kKilometer, Unit::kMile}) return value / kKmPerMile;
  if (pair == P{Unit::kFoot, Unit::kMeter}) return value * kMetersPerFoot;
  if (pair == P{Unit::kMeter, Unit::kFoot}) return value / kMetersPerFoot;
  if (pair == P{Unit::kFahrenheit, Unit::kCelsius}) return (value - 32.0) * 5.0 / 9.0;
  if (pair == P{Unit::kCelsius, Unit::kFahrenheit}) return value * 9.0 / 5.0 + 32.0;
  throw Error(Errc::kUnsupportedPair, "no conversion from " + std::string(unit_tag(from)) +
                                          " to " + std::string(unit_tag(to)));
}

double standardize(double value, Unit from) {
  switch (from) {
    case Unit::kKilometer: return value * 1000.0;
    case Unit::kMile: return convert_unit(value, Unit::kMile, Unit::kKilometer) * 1000.0;
    default: return convert_unit(value, from, canonical_unit(from));
  }
}

}  // namespace mobiscout::model
