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

#include "mobiscout/model/record_codec.hpp"

#include "mobiscout/common/error.hpp"
#include "mobiscout/model/checksum.hpp"
#include "mobiscout/model/serialize.hpp"

namespace mobiscout::model {

namespace {

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t get_u32(std::string_view in) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(in[i])) << (8 * i);
  return v;
}

}  // namespace

std::string encode_payload(const RecordPayload& payload) {
  std::string s = payload_to_json(payload).dump();
  s.push_back('\n');
  return s;
}

std::string frame_record(std::string_view payload) {
  if (payload.size() > kMaxRecordBytes) throw Error(Errc::kInvalidArgument, "record too large");
  std::string out;
  out.reserve(kRecordHeaderBytes + payload.size());
  put_u32(out, static_cast<uint32_t>(payload.size()));
  put_u32(out, crc32(payload));
  out.append(payload);
  return out;
}

RecordPayload decode_payload(Stream stream, std::string_view payload) {
  json j = json::parse(payload, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object())
    throw Error(Errc::kMalformed, "record payload is not a JSON object");
  return payload_from_json(stream, j);
}

ChunkScan scan_chunk(std::string_view bytes) {
  ChunkScan scan;
  size_t pos = 0;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < kRecordHeaderBytes) {
      scan.truncated = true;
      break;
    }
    const uint32_t len = get_u32(bytes.substr(pos));
    const uint32_t crc = get_u32(bytes.substr(pos + 4));
    if (len > kMaxRecordBytes || bytes.size() - pos - kRecordHeaderBytes < len) {
      scan.truncated = true;
      break;
    }
    const auto payload = bytes.substr(pos + kRecordHeaderBytes, len);
    if (crc32(payload) != crc) {
      scan.crc_failure = true;
      break;
    }
    scan.payloads.push_back(payload);
    pos += kRecordHeaderBytes + len;
  }
  scan.valid_bytes = pos;
  return scan;
}

}  // namespace mobiscout::model
