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

#include "mobiscout/sim/scenario.hpp"

namespace mobiscout::sim {

inline constexpr double kEarthRadiusM = 6'371'008.8;
inline constexpr double kGravity = 9.80665;  // m/s^2
inline constexpr double kHeartPerKmh = 0.2;   // bpm per km/h

struct TruthState {
  int64_t t = 0;                  // ms since scenario start
  double speed = 0;               // km/h
  double longitudinal_accel = 0;  // g
  double latitude = 0;
  double longitude = 0;
  double heading = 0;     // degrees
  double heart_rate = 0;  // bpm, noiseless
  double distance = 0;    // m travelled since t = 0
};

// Noiseless ground truth at `t_ms` (relative to scenario start). Throws
// Error(kOutOfRange) outside [0, duration].
TruthState sample_truth(const Scenario& scenario, int64_t t_ms);

// Great-circle distance in meters (haversine).
double great_circle_m(double lat1, double lon1, double lat2, double lon2);

}  // namespace mobiscout::sim
