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

#include <algorithm>
#include <numeric>

#include "mobiscout/model/manifest.hpp"
#include "mobiscout/model/types.hpp"

namespace mobiscout::model {

std::string_view category_name(Category c) noexcept {
  switch (c) {
    case Category::kMotion: return "motion";
    case Category::kLocation: return "location";
    case Category::kHealth: return "health";
    case Category::kVideo: return "video";
    case Category::kVehicle: return "vehicle";
  }
  return "?";
}

bool ConsentProfile::granted(Category c) const noexcept {
  switch (c) {
    case Category::kMotion: return motion;
    case Category::kLocation: return location;
    case Category::kHealth: return health;
    case Category::kVideo: return video;
    case Category::kVehicle: return vehicle;
  }
  return false;
}

void ConsentProfile::set(Category c, bool value) noexcept {
  switch (c) {
    case Category::kMotion: motion = value; break;
    case Category::kLocation: location = value; break;
    case Category::kHealth: health = value; break;
    case Category::kVideo: video = value; break;
    case Category::kVehicle: vehicle = value; break;
  }
}

ConsentProfile ConsentProfile::all_granted() { return from_mask(0x1f); }

ConsentProfile ConsentProfile::from_mask(unsigned mask) {
  ConsentProfile p;
  for (size_t i = 0; i < kAllCategories.size(); ++i)
    p.set(kAllCategories[i], (mask >> i) & 1u);
  return p;
}

std::string_view stream_name(Stream s) noexcept {
  switch (s) {
    case Stream::kMotion: return "motion";
    case Stream::kLocation: return "location";
    case Stream::kHeart: return "heart";
    case Stream::kVehicle: return "vehicle";
    case Stream::kVideoFront: return "videoFront";
    case Stream::kVideoBack: return "videoBack";
  }
  return "?";
}

std::optional<Stream> parse_stream(std::string_view name) noexcept {
  for (Stream s : kAllStreams)
    if (stream_name(s) == name) return s;
  return std::nullopt;
}

Category category_of(Stream s) noexcept {
  switch (s) {
    case Stream::kMotion: return Category::kMotion;
    case Stream::kLocation: return Category::kLocation;
    case Stream::kHeart: return Category::kHealth;
    case Stream::kVehicle: return Category::kVehicle;
    case Stream::kVideoFront:
    case Stream::kVideoBack: return Category::kVideo;
  }
  return Category::kMotion;
}

int64_t record_time(const RecordPayload& payload) noexcept {
  return std::visit([](const auto& p) { return p.t; }, payload);
}

void ValidationReport::error(std::string code, std::string message, std::string stream,
                             int64_t index) {
  errors.push_back({std::move(code), std::move(message), std::move(stream), index});
}

void ValidationReport::warning(std::string code, std::string message, std::string stream,
                               int64_t index) {
  warnings.push_back({std::move(code), std::move(message), std::move(stream), index});
}

void ValidationReport::merge(const ValidationReport& other) {
  errors.insert(errors.end(), other.errors.begin(), other.errors.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

bool ValidationReport::has_error(std::string_view code) const {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const ValidationIssue& i) { return i.code == code; });
}

std::string_view status_name(SessionStatus s) noexcept {
  switch (s) {
    case SessionStatus::kRecording: return "recording";
    case SessionStatus::kFinalized: return "finalized";
    case SessionStatus::kUploading: return "uploading";
    case SessionStatus::kUploaded: return "uploaded";
    case SessionStatus::kFailed: return "failed";
  }
  return "?";
}

std::optional<SessionStatus> parse_status(std::string_view name) noexcept {
  for (auto s : {SessionStatus::kRecording, SessionStatus::kFinalized,
                 SessionStatus::kUploading, SessionStatus::kUploaded, SessionStatus::kFailed})
    if (status_name(s) == name) return s;
  return std::nullopt;
}

bool SessionManifest::has_stream(Stream s) const {
  return std::find(streams.begin(), streams.end(), s) != streams.end();
}

uint64_t SessionManifest::total_bytes() const {
  return std::accumulate(chunks.begin(), chunks.end(), uint64_t{0},
                         [](uint64_t acc, const ChunkInfo& c) { return acc + c.byte_length; });
}

std::vector<ChunkInfo> SessionManifest::chunks_of(Stream s) const {
  std::vector<ChunkInfo> out;
  for (const auto& c : chunks)
    if (c.stream == s) out.push_back(c);
  std::sort(out.begin(), out.end(),
            [](const ChunkInfo& a, const ChunkInfo& b) { return a.index < b.index; });
  return out;
}

const ChunkInfo* SessionManifest::find_chunk(Stream s, uint32_t index) const {
  for (const auto& c : chunks)
    if (c.stream == s && c.index == index) return &c;
  return nullptr;
}

std::map<std::string, std::string> default_declared_units() {
  return {
      {"acceleration", "g"},   {"gravity", "g"},     {"rotationRate", "rad/s"},
      {"attitude", "rad"},     {"heartRate", "bpm"}, {"locationAccuracy", "m"},
      {"speed", "km/h"},       {"engineSpeed", "rpm"}, {"throttle", "%"},
      {"engineLoad", "%"},     {"coolantTemperature", "°C"},
      {"headphoneAudioExposure", "dB(A)"}, {"distanceWalkingRunning", "m"},
  };
}

std::string chunk_file_name(Stream s, uint32_t index) {
  return std::string(stream_name(s)) + "." + std::to_string(index) + ".chunk";
}

}  // namespace mobiscout::model
