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
#include <string>
#include <string_view>
#include <vector>

#include "mobiscout/model/types.hpp"

namespace mobiscout::model {

// Journal framing: each record is
//   u32 little-endian payload length | u32 little-endian crc32(payload) | payload
// and each payload is one compact JSON object followed by '\n'.
inline constexpr size_t kRecordHeaderBytes = 8;
inline constexpr uint32_t kMaxRecordBytes = 16u << 20;

std::string encode_payload(const RecordPayload& payload);
std::string frame_record(std::string_view payload);
inline std::string encode_record(const JournalRecord& r) {
  return frame_record(encode_payload(r.payload));
}

RecordPayload decode_payload(Stream stream, std::string_view payload);

struct ChunkScan {
  std::vector<std::string_view> payloads;  // views into the scanned buffer
  size_t valid_bytes = 0;                  // length of the CRC-valid prefix
  bool crc_failure = false;                // stopped on a checksum mismatch
  bool truncated = false;                  // stopped on a short header/payload
  bool complete() const { return !crc_failure && !truncated; }
};

// Walks records until the end of `bytes` or the first invalid record.
ChunkScan scan_chunk(std::string_view bytes);

}  // namespace mobiscout::model
