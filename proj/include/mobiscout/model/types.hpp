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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mobiscout::model {

// One timestamped motion record. Location fields are only populated when
// location consent is granted.
struct SensorSample {
  int64_t t = 0;  // unix ms
  std::optional<double> latitude;
  std::optional<double> longitude;
  std::optional<double> location_accuracy;  // meters
  double acceleration_x = 0, acceleration_y = 0, acceleration_z = 0;  // g
  double gyro_x = 0, gyro_y = 0, gyro_z = 0;                          // rad/s
  double pitch = 0, roll = 0, yaw = 0;                                // rad
  double quaternion_x = 0, quaternion_y = 0, quaternion_z = 0, quaternion_w = 1;
  double gravity_x = 0, gravity_y = 0, gravity_z = 1;  // g

  bool operator==(const SensorSample&) const = default;
};

struct LocationFix {
  int64_t t = 0;
  double latitude = 0;
  double longitude = 0;
  double accuracy = 0;  // meters

  bool operator==(const LocationFix&) const = default;
};

struct HeartReading {
  int64_t t = 0;
  double bpm = 0;

  bool operator==(const HeartReading&) const = default;
};

struct VehiclePidReading {
  int64_t t = 0;
  uint8_t mode = 0;
  uint8_t pid = 0;
  std::vector<uint8_t> raw;
  double value = 0;
  std::string unit;  // canonical unit tag

  bool operator==(const VehiclePidReading&) const = default;
};

// Opaque synthetic camera frame.
struct VideoFrame {
  int64_t t = 0;
  uint64_t frame = 0;
  std::string data;

  bool operator==(const VideoFrame&) const = default;
};

inline constexpr int kHealthWindowDays = 5;
inline constexpr int64_t kHealthWindowMs = 432'000'000;

struct HealthSnapshot {
  int64_t reference_time = 0;
  std::vector<double> heart_rate;                // bpm
  std::vector<double> headphone_audio_exposure;  // dB(A)
  std::vector<double> distance_walking_running;  // meters
  std::vector<double> step_count;                // counts
  int window_days = kHealthWindowDays;

  bool operator==(const HealthSnapshot&) const = default;
};

struct HealthSample {
  int64_t t = 0;
  double value = 0;
};

// Raw, unfiltered health history as queried from the wearable store.
struct RawHealth {
  std::vector<HealthSample> heart_rate;
  std::vector<HealthSample> headphone_audio_exposure;
  std::vector<HealthSample> distance_walking_running;
  std::vector<HealthSample> step_count;
};

struct UserSettings {
  double frame_rate = 30;  // frames/second
  double frequency = 1;    // Hz, motion sampling
  bool automatic_upload = true;

  bool operator==(const UserSettings&) const = default;
};

struct VehicleInfo {
  std::string vin;
  std::string make;
  std::string model;
  int model_year = 0;

  bool operator==(const VehicleInfo&) const = default;
};

enum class Category { kMotion, kLocation, kHealth, kVideo, kVehicle };
inline constexpr std::array<Category, 5> kAllCategories{
    Category::kMotion, Category::kLocation, Category::kHealth, Category::kVideo,
    Category::kVehicle};
std::string_view category_name(Category c) noexcept;

struct ConsentProfile {
  bool motion = false;
  bool location = false;
  bool health = false;
  bool video = false;
  bool vehicle = false;

  bool granted(Category c) const noexcept;
  void set(Category c, bool value) noexcept;
  static ConsentProfile all_granted();
  // Bit i corresponds to kAllCategories[i].
  static ConsentProfile from_mask(unsigned mask);

  bool operator==(const ConsentProfile&) const = default;
};

enum class Stream { kMotion, kLocation, kHeart, kVehicle, kVideoFront, kVideoBack };
inline constexpr std::array<Stream, 6> kAllStreams{
    Stream::kMotion,  Stream::kLocation,   Stream::kHeart,
    Stream::kVehicle, Stream::kVideoFront, Stream::kVideoBack};

std::string_view stream_name(Stream s) noexcept;
std::optional<Stream> parse_stream(std::string_view name) noexcept;
Category category_of(Stream s) noexcept;

using RecordPayload =
    std::variant<SensorSample, LocationFix, HeartReading, VehiclePidReading, VideoFrame>;

struct JournalRecord {
  Stream stream = Stream::kMotion;
  RecordPayload payload;
};

int64_t record_time(const RecordPayload& payload) noexcept;

struct ValidationIssue {
  std::string code;
  std::string message;
  std::string stream;
  int64_t record_index = -1;

  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool ok() const noexcept { return errors.empty(); }
  void error(std::string code, std::string message, std::string stream = {},
             int64_t index = -1);
  void warning(std::string code, std::string message, std::string stream = {},
               int64_t index = -1);
  void merge(const ValidationReport& other);
  bool has_error(std::string_view code) const;

  bool operator==(const ValidationReport&) const = default;
};

}  // namespace mobiscout::model
