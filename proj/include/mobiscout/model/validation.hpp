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

#include "mobiscout/model/types.hpp"

namespace mobiscout::model {

// Tolerances and ranges enforced on every record.
inline constexpr double kQuaternionNormTolerance = 1e-3;
inline constexpr double kGravityMinG = 0.9;
inline constexpr double kGravityMaxG = 1.1;
inline constexpr double kMinLocationAccuracyM = 5.0;
inline constexpr double kMaxLocationAccuracyM = 50.0;
inline constexpr double kHeartPlausibleMin = 25.0;
inline constexpr double kHeartPlausibleMax = 250.0;

// Hard physical-range violations are errors; physiological plausibility is a
// warning. `index` is copied into every issue.
ValidationReport validate_sample(const SensorSample& sample, const ConsentProfile& consent,
                                 int64_t index = -1);
ValidationReport validate_location(const LocationFix& fix, const ConsentProfile& consent,
                                   int64_t index = -1);
ValidationReport validate_heart(const HeartReading& reading, int64_t index = -1);
ValidationReport validate_vehicle(const VehiclePidReading& reading, int64_t index = -1);
ValidationReport validate_frame(const VideoFrame& frame, Stream stream, int64_t index = -1);
ValidationReport validate_record(Stream stream, const RecordPayload& payload,
                                 const ConsentProfile& consent, int64_t index = -1);

ValidationReport validate_health_snapshot(const HealthSnapshot& snapshot);
ValidationReport validate_settings(const UserSettings& settings);

}  // namespace mobiscout::model
