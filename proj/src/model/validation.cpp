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

#include "mobiscout/model/validation.hpp"

#include <cmath>
#include <initializer_list>
#include <sstream>

#include "mobiscout/model/units.hpp"

namespace mobiscout::model {

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

bool all_finite(std::initializer_list<double> values) {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

void check_lat_lon(ValidationReport& r, double lat, double lon, const std::string& stream,
                   int64_t index) {
  if (!(lat >= -90.0 && lat <= 90.0))
    r.error("LAT_RANGE", "latitude " + fmt(lat) + " outside [-90, 90]", stream, index);
  if (!(lon >= -180.0 && lon <= 180.0))
    r.error("LON_RANGE", "longitude " + fmt(lon) + " outside [-180, 180]", stream, index);
}

void check_accuracy(ValidationReport& r, double accuracy, const std::string& stream,
                    int64_t index) {
  if (!(accuracy >= kMinLocationAccuracyM && accuracy <= kMaxLocationAccuracyM))
    r.error("LOCATION_ACCURACY", "location accuracy " + fmt(accuracy) + " m outside [5, 50]",
            stream, index);
}

}  // namespace

ValidationReport validate_sample(const SensorSample& s, const ConsentProfile& consent,
                                 int64_t index) {
  ValidationReport r;
  const std::string stream(stream_name(Stream::kMotion));

  if (!all_finite({s.acceleration_x, s.acceleration_y, s.acceleration_z, s.gyro_x, s.gyro_y,
                   s.gyro_z, s.pitch, s.roll, s.yaw, s.quaternion_x, s.quaternion_y,
                   s.quaternion_z, s.quaternion_w, s.gravity_x, s.gravity_y, s.gravity_z})) {
    r.error("NON_FINITE", "sample carries a NaN or infinite value", stream, index);
  }

  const bool has_location = s.latitude || s.longitude || s.location_accuracy;
  if (has_location && !consent.location) {
    r.error("CONSENT_VIOLATION", "location fields present without location consent", stream,
            index);
  }
  if (s.latitude || s.longitude) {
    check_lat_lon(r, s.latitude.value_or(0.0), s.longitude.value_or(0.0), stream, index);
  }
  if (s.location_accuracy && consent.location) {
    check_accuracy(r, *s.location_accuracy, stream, index);
  }

  const double qnorm = std::sqrt(s.quaternion_x * s.quaternion_x + s.quaternion_y * s.quaternion_y +
                                 s.quaternion_z * s.quaternion_z + s.quaternion_w * s.quaternion_w);
  if (!(std::abs(qnorm - 1.0) <= kQuaternionNormTolerance))
    r.error("QUAT_NORM", "quaternion norm " + fmt(qnorm) + " differs from 1 by more than 1e-3",
            stream, index);

  const double gmag = std::sqrt(s.gravity_x * s.gravity_x + s.gravity_y * s.gravity_y +
                                s.gravity_z * s.gravity_z);
  if (!(gmag >= kGravityMinG && gmag <= kGravityMaxG))
    r.error("GRAVITY_MAGNITUDE", "gravity magnitude " + fmt(gmag) + " g outside [0.9, 1.1]",
            stream, index);
  return r;
}

ValidationReport validate_location(const LocationFix& f, const ConsentProfile& consent,
                                   int64_t index) {
  ValidationReport r;
  const std::string stream(stream_name(Stream::kLocation));
  if (!consent.location)
    r.error("CONSENT_VIOLATION", "location record without location consent", stream, index);
  check_lat_lon(r, f.latitude, f.longitude, stream, index);
  check_accuracy(r, f.accuracy, stream, index);
  return r;
}

ValidationReport validate_heart(const HeartReading& h, int64_t index) {
  ValidationReport r;
  const std::string stream(stream_name(Stream::kHeart));
  if (!std::isfinite(h.bpm) || h.bpm < 0) {
    r.error("NEGATIVE_VALUE", "heart rate " + fmt(h.bpm) + " is not a non-negative number",
            stream, index);
  } else if (h.bpm < kHeartPlausibleMin || h.bpm > kHeartPlausibleMax) {
    r.warning("HEART_RANGE", "heart rate " + fmt(h.bpm) + " bpm outside [25, 250]", stream,
              index);
  }
  return r;
}

ValidationReport validate_vehicle(const VehiclePidReading& v, int64_t index) {
  ValidationReport r;
  const std::string stream(stream_name(Stream::kVehicle));
  if (!std::isfinite(v.value))
    r.error("NON_FINITE", "vehicle reading value is not finite", stream, index);
  if (!is_canonical_tag(v.unit))
    r.error("UNIT_NONCANONICAL", "vehicle reading unit '" + v.unit + "' is not canonical",
            stream, index);
  if (v.raw.empty())
    r.error("SCHEMA", "vehicle reading carries no raw bytes", stream, index);
  return r;
}

ValidationReport validate_frame(const VideoFrame& f, Stream stream, int64_t index) {
  ValidationReport r;
  if (f.data.empty())
    r.error("SCHEMA", "frame " + std::to_string(f.frame) + " is empty",
            std::string(stream_name(stream)), index);
  return r;
}

ValidationReport validate_record(Stream stream, const RecordPayload& payload,
                                 const ConsentProfile& consent, int64_t index) {
  ValidationReport r;
  if (!consent.granted(category_of(stream))) {
    r.error("CONSENT_VIOLATION",
            std::string(stream_name(stream)) + " record without " +
                std::string(category_name(category_of(stream))) + " consent",
            std::string(stream_name(stream)), index);
  }
  if (const auto* s = std::get_if<SensorSample>(&payload)) {
    r.merge(validate_sample(*s, consent, index));
  } else if (const auto* f = std::get_if<LocationFix>(&payload)) {
    // Category check above already covers consent.
    auto lr = validate_location(*f, ConsentProfile::all_granted(), index);
    r.merge(lr);
  } else if (const auto* h = std::get_if<HeartReading>(&payload)) {
    r.merge(validate_heart(*h, index));
  } else if (const auto* v = std::get_if<VehiclePidReading>(&payload)) {
    r.merge(validate_vehicle(*v, index));
  } else if (const auto* vf = std::get_if<VideoFrame>(&payload)) {
    r.merge(validate_frame(*vf, stream, index));
  }
  return r;
}

ValidationReport validate_health_snapshot(const HealthSnapshot& h) {
  ValidationReport r;
  auto non_negative = [&](const std::vector<double>& values, const char* name) {
    for (size_t i = 0; i < values.size(); ++i)
      if (!std::isfinite(values[i]) || values[i] < 0)
        r.error("NEGATIVE_VALUE", std::string(name) + " value " + fmt(values[i]) + " < 0",
                "healthSnapshot", static_cast<int64_t>(i));
  };
  non_negative(h.heart_rate, "HeartRate");
  non_negative(h.headphone_audio_exposure, "HeadphoneAudioExposure");
  non_negative(h.distance_walking_running, "DistanceWalkingRunning");
  non_negative(h.step_count, "StepCount");
  for (size_t i = 0; i < h.heart_rate.size(); ++i) {
    const double bpm = h.heart_rate[i];
    if (bpm >= 0 && (bpm < kHeartPlausibleMin || bpm > kHeartPlausibleMax))
      r.warning("HEART_RANGE", "snapshot heart rate " + fmt(bpm) + " bpm outside [25, 250]",
                "healthSnapshot", static_cast<int64_t>(i));
  }
  if (h.window_days != kHealthWindowDays)
    r.error("HEALTH_WINDOW", "health window must be 5 days", "healthSnapshot");
  return r;
}

ValidationReport validate_settings(const UserSettings& s) {
  ValidationReport r;
  if (!(s.frame_rate >= 1 && s.frame_rate <= 60))
    r.error("FRAME_RATE_RANGE", "frameRate " + fmt(s.frame_rate) + " outside [1, 60]");
  if (!(s.frequency >= 0.1 && s.frequency <= 100))
    r.error("FREQUENCY_RANGE", "frequency " + fmt(s.frequency) + " outside [0.1, 100]");
  return r;
}

}  // namespace mobiscout::model
