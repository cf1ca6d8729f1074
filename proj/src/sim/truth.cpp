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

#include "mobiscout/sim/truth.hpp"

#include <cmath>
#include <numbers>

#include "mobiscout/common/error.hpp"

namespace mobiscout::sim {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Distance covered within a segment after `tau` seconds.
double segment_distance(const SpeedSegment& s, double tau) {
  const double v0 = s.start_speed / 3.6;
  const double a = (s.end_speed - s.start_speed) / 3.6 / (s.t_end - s.t_start);
  return v0 * tau + 0.5 * a * tau * tau;
}

}  // namespace

TruthState sample_truth(const Scenario& scenario, int64_t t_ms) {
  if (t_ms < 0 || t_ms > scenario.duration_ms())
    throw Error(Errc::kOutOfRange, "t = " + std::to_string(t_ms) + " ms outside the scenario");
  const double t = t_ms / 1000.0;

  TruthState out;
  out.t = t_ms;
  out.heading = scenario.route.heading;
  double travelled = 0;
  for (size_t i = 0; i < scenario.speed_profile.size(); ++i) {
    const auto& seg = scenario.speed_profile[i];
    const bool last = i + 1 == scenario.speed_profile.size();
    if (t < seg.t_end || last) {
      const double tau = std::min(t, seg.t_end) - seg.t_start;
      const double len = seg.t_end - seg.t_start;
      out.speed = seg.start_speed + (seg.end_speed - seg.start_speed) * (tau / len);
      out.longitudinal_accel = (seg.end_speed - seg.start_speed) / 3.6 / len / kGravity;
      travelled += segment_distance(seg, tau);
      break;
    }
    travelled += segment_distance(seg, seg.t_end - seg.t_start);
  }
  out.distance = travelled;

  const double heading = scenario.route.heading * kDegToRad;
  const double north = travelled * std::cos(heading);
  const double east = travelled * std::sin(heading);
  const double lat0 = scenario.route.latitude;
  out.latitude = lat0 + north / kEarthRadiusM / kDegToRad;
  out.longitude =
      scenario.route.longitude + east / (kEarthRadiusM * std::cos(lat0 * kDegToRad)) / kDegToRad;
  out.heart_rate = scenario.heart_baseline + kHeartPerKmh * out.speed;
  return out;
}

double great_circle_m(double lat1, double lon1, double lat2, double lon2) {
  const double p1 = lat1 * kDegToRad, p2 = lat2 * kDegToRad;
  const double dp = p2 - p1, dl = (lon2 - lon1) * kDegToRad;
  const double h = std::sin(dp / 2) * std::sin(dp / 2) +
                   std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
  return 2 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

}  // namespace mobiscout::sim
