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

#include "mobiscout/sim/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "mobiscout/common/error.hpp"
#include "mobiscout/common/files.hpp"
#include "mobiscout/model/serialize.hpp"

namespace mobiscout::sim {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(Errc::kInvalidArgument, "scenario: " + what);
}

constexpr double kEps = 1e-9;

}  // namespace

void Scenario::validate() const {
  if (!(duration > 0)) invalid("duration must be positive");
  if (speed_profile.empty()) invalid("speedProfile must not be empty");
  double cursor = 0;
  for (size_t i = 0; i < speed_profile.size(); ++i) {
    const auto& s = speed_profile[i];
    if (std::abs(s.t_start - cursor) > kEps)
      invalid("segment " + std::to_string(i) + " does not start where the previous one ends");
    if (!(s.t_end > s.t_start)) invalid("segment " + std::to_string(i) + " has non-positive length");
    if (s.start_speed < 0 || s.end_speed < 0) invalid("speeds must be >= 0");
    if (i > 0 && std::abs(speed_profile[i - 1].end_speed - s.start_speed) > kEps)
      invalid("speed is discontinuous at segment " + std::to_string(i));
    cursor = s.t_end;
  }
  if (std::abs(cursor - duration) > kEps) invalid("speedProfile must cover [0, duration]");

  auto zones = dead_zones;
  std::sort(zones.begin(), zones.end(),
            [](const DeadZone& a, const DeadZone& b) { return a.t_start < b.t_start; });
  for (size_t i = 0; i < zones.size(); ++i) {
    if (zones[i].t_start < 0 || zones[i].t_end > duration + kEps || !(zones[i].t_end > zones[i].t_start))
      invalid("dead zone outside [0, duration] or empty");
    if (i > 0 && zones[i].t_start < zones[i - 1].t_end - kEps) invalid("dead zones overlap");
  }
  if (!(location_accuracy >= 5 && location_accuracy <= 50)) invalid("locationAccuracy outside [5, 50]");
  if (!(route.latitude >= -90 && route.latitude <= 90 && route.longitude >= -180 &&
        route.longitude <= 180))
    invalid("route start outside valid coordinates");
  if (heart_baseline < 0) invalid("heartBaseline must be >= 0");
}

Scenario Scenario::from_json(const json& j) {
  Scenario s;
  try {
    s.seed = j.value("seed", s.seed);
    s.duration = j.at("duration").get<double>();
    for (const auto& seg : j.at("speedProfile")) {
      if (seg.is_array()) {
        s.speed_profile.push_back({seg.at(0).get<double>(), seg.at(1).get<double>(),
                                   seg.at(2).get<double>(), seg.at(3).get<double>()});
      } else {
        s.speed_profile.push_back({seg.at("tStart").get<double>(), seg.at("tEnd").get<double>(),
                                   seg.at("startSpeed").get<double>(),
                                   seg.at("endSpeed").get<double>()});
      }
    }
    if (auto it = j.find("route"); it != j.end()) {
      s.route.latitude = it->value("latitude", 0.0);
      s.route.longitude = it->value("longitude", 0.0);
      s.route.heading = it->value("heading", 0.0);
    }
    s.heart_baseline = j.value("heartBaseline", s.heart_baseline);
    for (const auto& z : j.value("deadZones", json::array())) {
      if (z.is_array())
        s.dead_zones.push_back({z.at(0).get<double>(), z.at(1).get<double>()});
      else
        s.dead_zones.push_back({z.at("tStart").get<double>(), z.at("tEnd").get<double>()});
    }
    if (auto it = j.find("noise"); it != j.end()) {
      if (it->is_string() && it->get<std::string>() == "none") {
        s.noise = NoiseTable::none();
      } else {
        s.noise.acceleration = it->value("acceleration", s.noise.acceleration);
        s.noise.gyro = it->value("gyro", s.noise.gyro);
        s.noise.attitude = it->value("attitude", s.noise.attitude);
        s.noise.quaternion = it->value("quaternion", s.noise.quaternion);
        s.noise.gravity = it->value("gravity", s.noise.gravity);
        s.noise.heart = it->value("heart", s.noise.heart);
        s.noise.location = it->value("location", s.noise.location);
      }
    }
    s.start_time = j.value("startTime", s.start_time);
    s.vin = j.value("vin", s.vin);
    s.location_accuracy = j.value("locationAccuracy", s.location_accuracy);
    if (auto it = j.find("consent"); it != j.end()) s.consent = it->get<model::ConsentProfile>();
    if (auto it = j.find("settings"); it != j.end()) s.settings = it->get<model::UserSettings>();
  } catch (const json::exception& e) {
    invalid(e.what());
  }
  s.validate();
  return s;
}

Scenario Scenario::load(const std::filesystem::path& path) {
  const auto text = files::read_all(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) invalid(path.string() + " is not valid JSON");
  return from_json(j);
}

json Scenario::to_json() const {
  json j{{"seed", seed},
         {"duration", duration},
         {"route", {{"latitude", route.latitude}, {"longitude", route.longitude}, {"heading", route.heading}}},
         {"heartBaseline", heart_baseline},
         {"noise",
          {{"acceleration", noise.acceleration},
           {"gyro", noise.gyro},
           {"attitude", noise.attitude},
           {"quaternion", noise.quaternion},
           {"gravity", noise.gravity},
           {"heart", noise.heart},
           {"location", noise.location}}},
         {"startTime", start_time},
         {"vin", vin},
         {"locationAccuracy", location_accuracy}};
  json segs = json::array();
  for (const auto& s : speed_profile)
    segs.push_back({{"tStart", s.t_start}, {"tEnd", s.t_end}, {"startSpeed", s.start_speed},
                    {"endSpeed", s.end_speed}});
  j["speedProfile"] = std::move(segs);
  json zones = json::array();
  for (const auto& z : dead_zones) zones.push_back({{"tStart", z.t_start}, {"tEnd", z.t_end}});
  j["deadZones"] = std::move(zones);
  if (consent) j["consent"] = *consent;
  if (settings) j["settings"] = *settings;
  return j;
}

Scenario Scenario::constant(double speed_kmh, double duration_s) {
  Scenario s;
  s.duration = duration_s;
  s.speed_profile = {{0, duration_s, speed_kmh, speed_kmh}};
  s.route = {41.99, -93.62, 0};
  return s;
}

}  // namespace mobiscout::sim
