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
#include <random>
#include <vector>

#include "mobiscout/model/types.hpp"
#include "mobiscout/sim/scenario.hpp"

namespace mobiscout::sim {

// Independent, reproducible random stream for one (seed, channel, tick).
// Lets emitters produce tick k without generating ticks 0..k-1.
std::mt19937_64 tick_rng(uint64_t seed, uint64_t channel, uint64_t tick);

// Periodic source with ticks k = 1, 2, ... at round(k * period) ms, keeping
// those that fall within the scenario duration.
class PeriodicEmitter {
 public:
  PeriodicEmitter(const Scenario& scenario, double frequency_hz);
  virtual ~PeriodicEmitter() = default;

  int64_t tick_time(uint64_t k) const;  // ms since scenario start
  uint64_t count() const;               // ticks within [0, duration]
  const Scenario& scenario() const { return scenario_; }

 protected:
  const Scenario& scenario_;
  double frequency_hz_;
};

class MotionEmitter final : public PeriodicEmitter {
 public:
  // Throws Error(kInvalidArgument) outside the UserSettings frequency bounds.
  MotionEmitter(const Scenario& scenario, double frequency_hz);
  model::SensorSample sample(uint64_t k) const;
  std::vector<model::SensorSample> all() const;
};

inline constexpr int64_t kHeartPeriodMs = 5000;

class HeartEmitter final : public PeriodicEmitter {
 public:
  explicit HeartEmitter(const Scenario& scenario);
  model::HeartReading sample(uint64_t k) const;
  std::vector<model::HeartReading> all() const;
};

inline constexpr double kLocationRateHz = 1.0;

class LocationEmitter final : public PeriodicEmitter {
 public:
  // Throws Error(kInvalidArgument) unless accuracy_m is within [5, 50].
  LocationEmitter(const Scenario& scenario, double accuracy_m);
  model::LocationFix sample(uint64_t k) const;
  std::vector<model::LocationFix> all() const;

 private:
  double accuracy_m_;
};

inline constexpr size_t kFrameBytes = 2048;

enum class Camera { kFront, kBack };

class VideoEmitter final : public PeriodicEmitter {
 public:
  VideoEmitter(const Scenario& scenario, double frame_rate, Camera camera);
  model::VideoFrame sample(uint64_t k) const;

 private:
  Camera camera_;
};

struct ConnectivityChange {
  int64_t t = 0;  // ms since scenario start
  bool online = true;

  bool operator==(const ConnectivityChange&) const = default;
};

// Initial state at t = 0 followed by a transition at every dead-zone edge.
std::vector<ConnectivityChange> connectivity_signal(const Scenario& scenario);
bool online_at(const Scenario& scenario, int64_t t_ms);

}  // namespace mobiscout::sim
