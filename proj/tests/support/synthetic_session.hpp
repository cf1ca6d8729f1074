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

// Hand-built sessions for exercising the upload path without a recorder.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mobiscout/model/checksum.hpp"
#include "mobiscout/model/manifest.hpp"
#include "mobiscout/model/record_codec.hpp"
#include "mobiscout/obd/codec.hpp"
#include "mobiscout/obd/pid.hpp"

namespace mobiscout::testing {

using ChunkKey = std::pair<model::Stream, uint32_t>;

struct SyntheticSession {
  model::SessionManifest manifest;
  std::map<ChunkKey, std::string> chunks;

  const std::string& bytes(model::Stream s, uint32_t index) const { return chunks.at({s, index}); }
};

inline model::RecordPayload synthetic_record(model::Stream stream, int64_t t, int i,
                                             const std::string& tag) {
  using model::Stream;
  switch (stream) {
    case Stream::kMotion: {
      model::SensorSample s;
      s.t = t;
      s.acceleration_z = 0.01 * (i % 17);
      return s;
    }
    case Stream::kLocation:
      return model::LocationFix{t, 41.99 + 1e-5 * i, -93.62, 10};
    case Stream::kHeart:
      return model::HeartReading{t, 70.0 + i % 5};
    case Stream::kVehicle: {
      const auto* spec = obd::find_pid(0x01, 0x0D);
      model::VehiclePidReading r{t, 0x01, 0x0D, {static_cast<uint8_t>(i % 200)}, 0,
                                 std::string(spec->unit)};
      r.value = obd::decode_value(*spec, r.raw);
      return r;
    }
    case Stream::kVideoFront:
    case Stream::kVideoBack:
      return model::VideoFrame{t, static_cast<uint64_t>(i), tag.empty() ? std::string(64, 'f') : tag};
  }
  return model::HeartReading{t, 70};
}

// Every stream gets `records` records spread over `chunks_per_stream`
// chunks. A non-empty `frame_tag` becomes the payload of every video frame.
inline SyntheticSession synthetic_session(const std::string& session_id,
                                          const std::vector<model::Stream>& streams,
                                          const model::ConsentProfile& consent, int records = 12,
                                          uint32_t chunks_per_stream = 2,
                                          const std::string& frame_tag = {}) {
  SyntheticSession out;
  auto& m = out.manifest;
  m.session_id = session_id;
  m.created_at = 1'700'000'000'000;
  m.consent = consent;
  m.streams = streams;
  m.status = model::SessionStatus::kFinalized;
  m.units = model::default_declared_units();
  for (auto stream : streams) {
    const int per_chunk = (records + static_cast<int>(chunks_per_stream) - 1) /
                          static_cast<int>(chunks_per_stream);
    for (uint32_t c = 0; c < chunks_per_stream; ++c) {
      std::string bytes;
      uint64_t count = 0;
      for (int i = static_cast<int>(c) * per_chunk; i < std::min(records, (static_cast<int>(c) + 1) * per_chunk);
           ++i, ++count)
        bytes += model::frame_record(
            model::encode_payload(synthetic_record(stream, m.created_at + 1000LL * i, i, frame_tag)));
      m.chunks.push_back({c, stream, bytes.size(), model::checksum(bytes), count});
      out.chunks[{stream, c}] = std::move(bytes);
    }
  }
  return out;
}

}  // namespace mobiscout::testing
