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

// JSON mapping of the domain types. Field names follow the record schema
// (camelCase, health categories as HeartRate/StepCount/...).

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>
#include "mobiscout/model/manifest.hpp"
#include "mobiscout/model/types.hpp"

namespace mobiscout::model {

using nlohmann::json;

void to_json(json& j, const SensorSample& s);
void from_json(const json& j, SensorSample& s);
void to_json(json& j, const LocationFix& f);
void from_json(const json& j, LocationFix& f);
void to_json(json& j, const HeartReading& h);
void from_json(const json& j, HeartReading& h);
void to_json(json& j, const VehiclePidReading& r);
void from_json(const json& j, VehiclePidReading& r);
void to_json(json& j, const VideoFrame& f);
void from_json(const json& j, VideoFrame& f);
void to_json(json& j, const HealthSnapshot& h);
void from_json(const json& j, HealthSnapshot& h);
void to_json(json& j, const UserSettings& s);
void from_json(const json& j, UserSettings& s);
void to_json(json& j, const VehicleInfo& v);
void from_json(const json& j, VehicleInfo& v);
void to_json(json& j, const ConsentProfile& c);
void from_json(const json& j, ConsentProfile& c);
void to_json(json& j, const ValidationIssue& i);
void from_json(const json& j, ValidationIssue& i);
void to_json(json& j, const ValidationReport& r);
void from_json(const json& j, ValidationReport& r);
void to_json(json& j, const ChunkInfo& c);
void from_json(const json& j, ChunkInfo& c);
void to_json(json& j, const SessionManifest& m);
void from_json(const json& j, SessionManifest& m);

json payload_to_json(const RecordPayload& payload);
// Throws Error(kMalformed) when `j` does not match the schema of `stream`.
RecordPayload payload_from_json(Stream stream, const json& j);

// Numeric top-level fields of a record by JSON name ("t" included).
std::vector<std::pair<std::string, double>> numeric_fields(const RecordPayload& payload);
// Field charted when none is requested, e.g. accelerationZ for motion.
std::string_view default_series_field(Stream stream) noexcept;

}  // namespace mobiscout::model
