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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobiscout/model/types.hpp"

namespace mobiscout::model {

enum class SessionStatus { kRecording, kFinalized, kUploading, kUploaded, kFailed };
std::string_view status_name(SessionStatus s) noexcept;
std::optional<SessionStatus> parse_status(std::string_view name) noexcept;

struct ChunkInfo {
  uint32_t index = 0;
  Stream stream = Stream::kMotion;
  uint64_t byte_length = 0;
  std::string digest;  // sha-256, lowercase hex
  uint64_t record_count = 0;

  bool operator==(const ChunkInfo&) const = default;
};

// Binds a recording's streams, settings, consent and closed chunks. Chunks are
// listed in the order they were closed.
struct SessionManifest {
  std::string session_id;
  std::string user_id;
  int64_t created_at = 0;
  UserSettings settings;
  ConsentProfile consent;
  std::optional<VehicleInfo> vehicle;
  std::optional<HealthSnapshot> health_snapshot;
  std::vector<Stream> streams;
  std::vector<ChunkInfo> chunks;
  SessionStatus status = SessionStatus::kRecording;
  // Unit tag per recorded quantity, e.g. {"speed": "km/h"}.
  std::map<std::string, std::string> units;

  bool has_stream(Stream s) const;
  uint64_t total_bytes() const;
  std::vector<ChunkInfo> chunks_of(Stream s) const;
  const ChunkInfo* find_chunk(Stream s, uint32_t index) const;

  bool operator==(const SessionManifest&) const = default;
};

// Units every agent-produced manifest declares.
std::map<std::string, std::string> default_declared_units();

std::string chunk_file_name(Stream s, uint32_t index);

}  // namespace mobiscout::model
