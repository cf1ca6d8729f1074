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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mobiscout/model/types.hpp"

namespace mobiscout::sim {

struct SpeedSegment {
  double t_start = 0;  // s
  double t_end = 0;    // s
  double start_speed = 0;  // km/h
  double end_speed = 0;    // km/h
};

struct Route {
  double latitude = 0;
  double longitude = 0;
  double heading = 0;  // degrees clockwise from north
};

struct DeadZone {
  double t_start = 0;  // s
  double t_end = 0;    // s
};

// Gaussian standard deviations per channel. `location` scales the fix noise,
// whose std-dev is accuracy/2 meters at scale 1.
struct NoiseTable {
  double acceleration = 0.01;  // g
  double gyro = 0.002;         // rad/s
  double attitude = 0.001;     // rad
  double quaternion = 0.0002;
  double gravity = 0.002;  // g
  double heart = 1.0;      // bpm
  double location = 1.0;

  static NoiseTable none() { return {0, 0, 0, 0, 0, 0, 0}; }
};

struct Scenario {
  uint64_t seed = 1;
  double duration = 60;  // s
  std::vector<SpeedSegment> speed_profile;
  Route route;
  double heart_baseline = 65;  // bpm
  std::vector<DeadZone> dead_zones;
  NoiseTable noise;
  int64_t start_time = 1'700'000'000'000;  // unix ms of scenario t = 0
  std::string vin = "1HGCM82633A004352";
  double location_accuracy = 10;  // m
  // Optional overrides used by orchestration (defaults: all granted,
  // default settings).
  std::optional<model::ConsentProfile> consent;
  std::optional<model::UserSettings> settings;

  int64_t duration_ms() const { return static_cast<int64_t>(duration * 1000.0 + 0.5); }

  // Throws Error(kInvalidArgument) describing the first violated invariant:
  // contiguous non-overlapping segments covering [0, duration], speeds >= 0,
  // dead zones inside [0, duration] and not overlapping each other.
  void validate() const;

  static Scenario from_json(const nlohmann::json& j);
  static Scenario load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  // A constant-speed scenario, mainly for tests.
  static Scenario constant(double speed_kmh, double duration_s);
};

}  // namespace mobiscout::sim
