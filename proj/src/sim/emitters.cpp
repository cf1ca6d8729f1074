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

#include "mobiscout/sim/emitters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mobiscout/common/error.hpp"
#include "mobiscout/sim/truth.hpp"

namespace mobiscout::sim {

namespace {

enum Channel : uint64_t { kMotion = 1, kHeart = 2, kLocation = 3, kVideoFront = 4, kVideoBack = 5 };

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double gauss(std::mt19937_64& rng, double sigma) {
  std::normal_distribution<double> dist(0.0, 1.0);
  const double z = dist(rng);
  return sigma * z;
}

}  // namespace

std::mt19937_64 tick_rng(uint64_t seed, uint64_t channel, uint64_t tick) {
  return std::mt19937_64(splitmix64(splitmix64(splitmix64(seed) ^ channel) ^ tick));
}

PeriodicEmitter::PeriodicEmitter(const Scenario& scenario, double frequency_hz)
    : scenario_(scenario), frequency_hz_(frequency_hz) {
  if (!(frequency_hz_ > 0)) throw Error(Errc::kInvalidArgument, "frequency must be positive");
}

int64_t PeriodicEmitter::tick_time(uint64_t k) const {
  return static_cast<int64_t>(std::llround(static_cast<double>(k) * 1000.0 / frequency_hz_));
}

uint64_t PeriodicEmitter::count() const {
  const int64_t end = scenario_.duration_ms();
  uint64_t k = static_cast<uint64_t>(std::floor(end * frequency_hz_ / 1000.0));
  while (k > 0 && tick_time(k) > end) --k;
  while (tick_time(k + 1) <= end) ++k;
  return k;
}

MotionEmitter::MotionEmitter(const Scenario& scenario, double frequency_hz)
    : PeriodicEmitter(scenario, frequency_hz) {
  if (!(frequency_hz >= 0.1 && frequency_hz <= 100))
    throw Error(Errc::kInvalidArgument, "motion frequency outside [0.1, 100] Hz");
}

model::SensorSample MotionEmitter::sample(uint64_t k) const {
  const int64_t t = tick_time(k);
  const TruthState truth = sample_truth(scenario_, t);
  const NoiseTable& n = scenario_.noise;
  auto rng = tick_rng(scenario_.seed, kMotion, k);

  model::SensorSample s;
  s.t = scenario_.start_time + t;
  s.acceleration_x = truth.longitudinal_accel + gauss(rng, n.acceleration);
  s.acceleration_y = gauss(rng, n.acceleration);
  s.acceleration_z = gauss(rng, n.acceleration);
  s.gyro_x = gauss(rng, n.gyro);
  s.gyro_y = gauss(rng, n.gyro);
  s.gyro_z = gauss(rng, n.gyro);

  // Heading measured clockwise from north; yaw is counter-clockwise.
  double yaw = -truth.heading * std::numbers::pi / 180.0;
  yaw = std::remainder(yaw, 2 * std::numbers::pi);
  s.pitch = gauss(rng, n.attitude);
  s.roll = gauss(rng, n.attitude);
  s.yaw = yaw + gauss(rng, n.attitude);

  double qx = gauss(rng, n.quaternion);
  double qy = gauss(rng, n.quaternion);
  double qz = std::sin(yaw / 2) + gauss(rng, n.quaternion);
  double qw = std::cos(yaw / 2) + gauss(rng, n.quaternion);
  const double norm = std::sqrt(qx * qx + qy * qy + qz * qz + qw * qw);
  s.quaternion_x = qx / norm;
  s.quaternion_y = qy / norm;
  s.quaternion_z = qz / norm;
  s.quaternion_w = qw / norm;

  s.gravity_x = gauss(rng, n.gravity);
  s.gravity_y = gauss(rng, n.gravity);
  s.gravity_z = 1.0 + gauss(rng, n.gravity);
  return s;
}

std::vector<model::SensorSample> MotionEmitter::all() const {
  std::vector<model::SensorSample> out;
  for (uint64_t k = 1, n = count(); k <= n; ++k) out.push_back(sample(k));
  return out;
}

HeartEmitter::HeartEmitter(const Scenario& scenario)
    : PeriodicEmitter(scenario, 1000.0 / kHeartPeriodMs) {}

model::HeartReading HeartEmitter::sample(uint64_t k) const {
  const int64_t t = static_cast<int64_t>(k) * kHeartPeriodMs;
  const TruthState truth = sample_truth(scenario_, t);
  auto rng = tick_rng(scenario_.seed, kHeart, k);
  const double bpm = truth.heart_rate + gauss(rng, scenario_.noise.heart);
  return {scenario_.start_time + t, std::max(0.0, bpm)};
}

std::vector<model::HeartReading> HeartEmitter::all() const {
  std::vector<model::HeartReading> out;
  for (uint64_t k = 1, n = count(); k <= n; ++k) out.push_back(sample(k));
  return out;
}

LocationEmitter::LocationEmitter(const Scenario& scenario, double accuracy_m)
    : PeriodicEmitter(scenario, kLocationRateHz), accuracy_m_(accuracy_m) {
  if (!(accuracy_m >= 5 && accuracy_m <= 50))
    throw Error(Errc::kInvalidArgument, "location accuracy target outside [5, 50] m");
}

model::LocationFix LocationEmitter::sample(uint64_t k) const {
  const int64_t t = tick_time(k);
  const TruthState truth = sample_truth(scenario_, t);
  auto rng = tick_rng(scenario_.seed, kLocation, k);
  const double sigma = accuracy_m_ / 2 * scenario_.noise.location;
  const double north = gauss(rng, sigma);
  const double east = gauss(rng, sigma);
  constexpr double kRadToDeg = 180.0 / std::numbers::pi;
  model::LocationFix fix;
  fix.t = scenario_.start_time + t;
  fix.latitude = truth.latitude + north / kEarthRadiusM * kRadToDeg;
  fix.longitude = truth.longitude +
                  east / (kEarthRadiusM * std::cos(truth.latitude / kRadToDeg)) * kRadToDeg;
  fix.accuracy = accuracy_m_;
  return fix;
}

std::vector<model::LocationFix> LocationEmitter::all() const {
  std::vector<model::LocationFix> out;
  for (uint64_t k = 1, n = count(); k <= n; ++k) out.push_back(sample(k));
  return out;
}

VideoEmitter::VideoEmitter(const Scenario& scenario, double frame_rate, Camera camera)
    : PeriodicEmitter(scenario, frame_rate), camera_(camera) {}

model::VideoFrame VideoEmitter::sample(uint64_t k) const {
  auto rng = tick_rng(scenario_.seed, camera_ == Camera::kFront ? kVideoFront : kVideoBack, k);
  model::VideoFrame f;
  f.t = scenario_.start_time + tick_time(k);
  f.frame = k;
  f.data.resize(kFrameBytes);
  for (size_t i = 0; i < kFrameBytes; i += 8) {
    uint64_t word = rng();
    for (size_t b = 0; b < 8; ++b) f.data[i + b] = static_cast<char>((word >> (8 * b)) & 0xFF);
  }
  return f;
}

std::vector<ConnectivityChange> connectivity_signal(const Scenario& scenario) {
  auto zones = scenario.dead_zones;
  std::sort(zones.begin(), zones.end(),
            [](const DeadZone& a, const DeadZone& b) { return a.t_start < b.t_start; });
  std::vector<ConnectivityChange> out{{0, true}};
  for (const auto& z : zones) {
    const int64_t on = std::llround(z.t_start * 1000);
    const int64_t off = std::llround(z.t_end * 1000);
    if (out.back().t == on)
      out.back().online = false;
    else
      out.push_back({on, false});
    out.push_back({off, true});
  }
  return out;
}

bool online_at(const Scenario& scenario, int64_t t_ms) {
  bool online = true;
  for (const auto& c : connectivity_signal(scenario))
    if (c.t <= t_ms) online = c.online;
  return online;
}

}  // namespace mobiscout::sim
