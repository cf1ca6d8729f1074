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
#include <vector>

namespace mobiscout::obd {

inline constexpr double kStandardGravity = 9.80665;  // m/s^2
inline constexpr double kBrakingThresholdG = 0.2;
inline constexpr int64_t kBrakingMinDurationMs = 500;

struct SpeedPoint {
  int64_t t = 0;       // ms
  double speed = 0;    // km/h
};

struct BrakingEvent {
  int64_t t_start = 0;
  int64_t t_end = 0;
  double peak_decel = 0;  // g
};

// Maximal runs of consecutive intervals whose finite-difference deceleration
// is at least 0.2 g, kept when they last at least 500 ms. Output intervals
// are disjoint and ordered by time.
std::vector<BrakingEvent> detect_braking(std::span<const SpeedPoint> series);

}  // namespace mobiscout::obd
