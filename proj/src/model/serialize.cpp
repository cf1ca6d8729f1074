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

#include "mobiscout/model/serialize.hpp"

#include "mobiscout/common/error.hpp"
#include "mobiscout/common/files.hpp"

namespace mobiscout::model {

namespace {

template <typename T>
void get_optional(const json& j, const char* key, std::optional<T>& out) {
  auto it = j.find(key);
  if (it != j.end() && !it->is_null())
    out = it->get<T>();
  else
    out.reset();
}

template <typename T>
void get_or(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it != j.end() && !it->is_null()) out = it->get<T>();
}

}  // namespace

void to_json(json& j, const SensorSample& s) {
  j = json{{"t", s.t}};
  if (s.latitude) j["latitude"] = *s.latitude;
  if (s.longitude) j["longitude"] = *s.longitude;
  if (s.location_accuracy) j["locationAccuracy"] = *s.location_accuracy;
  j["accelerationX"] = s.acceleration_x;
  j["accelerationY"] = s.acceleration_y;
  j["accelerationZ"] = s.acceleration_z;
  j["gyroDataX"] = s.gyro_x;
  j["gyroDataY"] = s.gyro_y;
  j["gyroDataZ"] = s.gyro_z;
  j["pitchData"] = s.pitch;
  j["rollData"] = s.roll;
  j["yawData"] = s.yaw;
  j["quaternionX"] = s.quaternion_x;
  j["quaternionY"] = s.quaternion_y;
  j["quaternionZ"] = s.quaternion_z;
  j["quaternionW"] = s.quaternion_w;
  j["gravityDataX"] = s.gravity_x;
  j["gravityDataY"] = s.gravity_y;
  j["gravityDataZ"] = s.gravity_z;
}

void from_json(const json& j, SensorSample& s) {
  j.at("t").get_to(s.t);
  get_optional(j, "latitude", s.latitude);
  get_optional(j, "longitude", s.longitude);
  get_optional(j, "locationAccuracy", s.location_accuracy);
  j.at("accelerationX").get_to(s.acceleration_x);
  j.at("accelerationY").get_to(s.acceleration_y);
  j.at("accelerationZ").get_to(s.acceleration_z);
  j.at("gyroDataX").get_to(s.gyro_x);
  j.at("gyroDataY").get_to(s.gyro_y);
  j.at("gyroDataZ").get_to(s.gyro_z);
  j.at("pitchData").get_to(s.pitch);
  j.at("rollData").get_to(s.roll);
  j.at("yawData").get_to(s.yaw);
  j.at("quaternionX").get_to(s.quaternion_x);
  j.at("quaternionY").get_to(s.quaternion_y);
  j.at("quaternionZ").get_to(s.quaternion_z);
  j.at("quaternionW").get_to(s.quaternion_w);
  j.at("gravityDataX").get_to(s.gravity_x);
  j.at("gravityDataY").get_to(s.gravity_y);
  j.at("gravityDataZ").get_to(s.gravity_z);
}

void to_json(json& j, const LocationFix& f) {
  j = json{{"t", f.t},
           {"latitude", f.latitude},
           {"longitude", f.longitude},
           {"locationAccuracy", f.accuracy}};
}

void from_json(const json& j, LocationFix& f) {
  j.at("t").get_to(f.t);
  j.at("latitude").get_to(f.latitude);
  j.at("longitude").get_to(f.longitude);
  j.at("locationAccuracy").get_to(f.accuracy);
}

void to_json(json& j, const HeartReading& h) { j = json{{"t", h.t}, {"heartRate", h.bpm}}; }

void from_json(const json& j, HeartReading& h) {
  j.at("t").get_to(h.t);
  j.at("heartRate").get_to(h.bpm);
}

void to_json(json& j, const VehiclePidReading& r) {
  j = json{{"t", r.t}, {"mode", r.mode}, {"pid", r.pid},
           {"raw", r.raw}, {"value", r.value}, {"unit", r.unit}};
}

void from_json(const json& j, VehiclePidReading& r) {
  j.at("t").get_to(r.t);
  j.at("mode").get_to(r.mode);
  j.at("pid").get_to(r.pid);
  j.at("raw").get_to(r.raw);
  j.at("value").get_to(r.value);
  j.at("unit").get_to(r.unit);
}

void to_json(json& j, const VideoFrame& f) {
  j = json{{"t", f.t}, {"frame", f.frame}, {"data", files::base64_encode(f.data)}};
}

void from_json(const json& j, VideoFrame& f) {
  j.at("t").get_to(f.t);
  j.at("frame").get_to(f.frame);
  f.data = files::base64_decode(j.at("data").get<std::string>());
}

void to_json(json& j, const HealthSnapshot& h) {
  j = json{{"referenceTime", h.reference_time},
           {"HeartRate", h.heart_rate},
           {"HeadphoneAudioExposure", h.headphone_audio_exposure},
           {"DistanceWalkingRunning", h.distance_walking_running},
           {"StepCount", h.step_count},
           {"windowDays", h.window_days}};
}

void from_json(const json& j, HealthSnapshot& h) {
  j.at("referenceTime").get_to(h.reference_time);
  get_or(j, "HeartRate", h.heart_rate);
  get_or(j, "HeadphoneAudioExposure", h.headphone_audio_exposure);
  get_or(j, "DistanceWalkingRunning", h.distance_walking_running);
  get_or(j, "StepCount", h.step_count);
  get_or(j, "windowDays", h.window_days);
}

void to_json(json& j, const UserSettings& s) {
  j = json{{"frameRate", s.frame_rate},
           {"frequency", s.frequency},
           {"automaticUpload", s.automatic_upload}};
}

void from_json(const json& j, UserSettings& s) {
  s = UserSettings{};
  get_or(j, "frameRate", s.frame_rate);
  get_or(j, "frequency", s.frequency);
  get_or(j, "automaticUpload", s.automatic_upload);
}

void to_json(json& j, const VehicleInfo& v) {
  j = json{{"vin", v.vin}, {"make", v.make}, {"model", v.model}, {"modelYear", v.model_year}};
}

void from_json(const json& j, VehicleInfo& v) {
  j.at("vin").get_to(v.vin);
  get_or(j, "make", v.make);
  get_or(j, "model", v.model);
  get_or(j, "modelYear", v.model_year);
}

void to_json(json& j, const ConsentProfile& c) {
  j = json::object();
  for (Category cat : kAllCategories)
    j[std::string(category_name(cat))] = c.granted(cat) ? "granted" : "denied";
}

void from_json(const json& j, ConsentProfile& c) {
  c = ConsentProfile{};
  for (Category cat : kAllCategories) {
    auto it = j.find(std::string(category_name(cat)));
    if (it == j.end()) continue;
    if (it->is_boolean())
      c.set(cat, it->get<bool>());
    else if (it->is_string())
      c.set(cat, it->get<std::string>() == "granted");
  }
}

void to_json(json& j, const ValidationIssue& i) {
  j = json{{"code", i.code}, {"message", i.message}};
  if (!i.stream.empty()) j["stream"] = i.stream;
  if (i.record_index >= 0) j["recordIndex"] = i.record_index;
}

void from_json(const json& j, ValidationIssue& i) {
  j.at("code").get_to(i.code);
  get_or(j, "message", i.message);
  get_or(j, "stream", i.stream);
  i.record_index = j.value("recordIndex", int64_t{-1});
}

void to_json(json& j, const ValidationReport& r) {
  j = json{{"ok", r.ok()}, {"errors", r.errors}, {"warnings", r.warnings}};
}

void from_json(const json& j, ValidationReport& r) {
  r = ValidationReport{};
  get_or(j, "errors", r.errors);
  get_or(j, "warnings", r.warnings);
}

void to_json(json& j, const ChunkInfo& c) {
  j = json{{"index", c.index},
           {"stream", stream_name(c.stream)},
           {"byteLength", c.byte_length},
           {"digest", c.digest},
           {"recordCount", c.record_count}};
}

void from_json(const json& j, ChunkInfo& c) {
  j.at("index").get_to(c.index);
  auto s = parse_stream(j.at("stream").get<std::string>());
  if (!s) throw Error(Errc::kMalformed, "unknown stream " + j.at("stream").dump());
  c.stream = *s;
  j.at("byteLength").get_to(c.byte_length);
  j.at("digest").get_to(c.digest);
  c.record_count = j.value("recordCount", uint64_t{0});
}

void to_json(json& j, const SessionManifest& m) {
  j = json{{"sessionId", m.session_id},
           {"userId", m.user_id},
           {"createdAt", m.created_at},
           {"settings", m.settings},
           {"consent", m.consent},
           {"status", status_name(m.status)},
           {"chunks", m.chunks},
           {"units", m.units}};
  json streams = json::array();
  for (Stream s : m.streams) streams.push_back(stream_name(s));
  j["streams"] = std::move(streams);
  if (m.vehicle) j["vehicle"] = *m.vehicle;
  if (m.health_snapshot) j["healthSnapshot"] = *m.health_snapshot;
}

void from_json(const json& j, SessionManifest& m) {
  m = SessionManifest{};
  j.at("sessionId").get_to(m.session_id);
  get_or(j, "userId", m.user_id);
  get_or(j, "createdAt", m.created_at);
  get_or(j, "settings", m.settings);
  get_or(j, "consent", m.consent);
  get_optional(j, "vehicle", m.vehicle);
  get_optional(j, "healthSnapshot", m.health_snapshot);
  for (const auto& s : j.value("streams", json::array())) {
    auto parsed = parse_stream(s.get<std::string>());
    if (!parsed) throw Error(Errc::kMalformed, "unknown stream " + s.dump());
    m.streams.push_back(*parsed);
  }
  get_or(j, "chunks", m.chunks);
  auto status = parse_status(j.value("status", std::string("recording")));
  if (!status) throw Error(Errc::kMalformed, "unknown session status");
  m.status = *status;
  get_or(j, "units", m.units);
}

json payload_to_json(const RecordPayload& payload) {
  return std::visit([](const auto& p) { return json(p); }, payload);
}

RecordPayload payload_from_json(Stream stream, const json& j) {
  try {
    switch (stream) {
      case Stream::kMotion: return j.get<SensorSample>();
      case Stream::kLocation: return j.get<LocationFix>();
      case Stream::kHeart: return j.get<HeartReading>();
      case Stream::kVehicle: return j.get<VehiclePidReading>();
      case Stream::kVideoFront:
      case Stream::kVideoBack: return j.get<VideoFrame>();
    }
  } catch (const json::exception& e) {
    throw Error(Errc::kMalformed, std::string(stream_name(stream)) + " record: " + e.what());
  }
  throw Error(Errc::kMalformed, "unknown stream");
}

std::vector<std::pair<std::string, double>> numeric_fields(const RecordPayload& payload) {
  std::vector<std::pair<std::string, double>> out;
  const json j = payload_to_json(payload);
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it->is_number()) out.emplace_back(it.key(), it->get<double>());
  return out;
}

std::string_view default_series_field(Stream stream) noexcept {
  switch (stream) {
    case Stream::kMotion: return "accelerationZ";
    case Stream::kLocation: return "latitude";
    case Stream::kHeart: return "heartRate";
    case Stream::kVehicle: return "value";
    case Stream::kVideoFront:
    case Stream::kVideoBack: return "frame";
  }
  return "t";
}

}  // namespace mobiscout::model
