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

#include "mobiscout/model/revalidate.hpp"

#include <algorithm>
#include <climits>
#include <map>

#include "mobiscout/common/error.hpp"
#include "mobiscout/model/checksum.hpp"
#include "mobiscout/model/record_codec.hpp"
#include "mobiscout/model/units.hpp"
#include "mobiscout/model/validation.hpp"

namespace mobiscout::model {

ValidationReport check_manifest(const SessionManifest& m) {
  ValidationReport r;
  for (Stream s : m.streams) {
    if (!m.consent.granted(category_of(s)))
      r.error("CONSENT_VIOLATION",
              "stream " + std::string(stream_name(s)) + " recorded without " +
                  std::string(category_name(category_of(s))) + " consent",
              std::string(stream_name(s)));
  }
  if (m.health_snapshot && !m.consent.health)
    r.error("CONSENT_VIOLATION", "health snapshot present without health consent",
            "healthSnapshot");
  if (m.health_snapshot) r.merge(validate_health_snapshot(*m.health_snapshot));
  r.merge(validate_settings(m.settings));

  for (const auto& [quantity, tag] : m.units) {
    if (!is_canonical_tag(tag))
      r.error("UNIT_NONCANONICAL", quantity + " declared in '" + tag + "', expected canonical unit");
  }

  std::map<Stream, std::vector<uint32_t>> indices;
  for (const auto& c : m.chunks) {
    if (!m.has_stream(c.stream))
      r.error("SCHEMA", "chunk " + std::to_string(c.index) + " belongs to undeclared stream",
              std::string(stream_name(c.stream)));
    indices[c.stream].push_back(c.index);
  }
  for (auto& [stream, idx] : indices) {
    std::sort(idx.begin(), idx.end());
    for (size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] != i) {
        r.error("CHUNK_GAP", "chunk indices not contiguous from 0", std::string(stream_name(stream)),
                static_cast<int64_t>(i));
        break;
      }
    }
  }
  return r;
}

ValidationReport revalidate_manifest(const SessionManifest& m, ChunkReader& reader,
                                     const RevalidateOptions& options) {
  ValidationReport r = check_manifest(m);
  const uint64_t every = options.sample_every == 0 ? 1 : options.sample_every;

  for (Stream stream : kAllStreams) {
    const auto chunks = m.chunks_of(stream);
    if (chunks.empty()) continue;
    const std::string sname(stream_name(stream));

    // Decode everything first so the last record of the stream is known.
    struct Rec {
      RecordPayload payload;
      int64_t index;
    };
    std::vector<Rec> sampled;
    int64_t index = 0;
    int64_t last_t = INT64_MIN;
    std::map<int, int64_t> last_t_by_key;
    std::optional<Rec> last;

    for (const auto& c : chunks) {
      const std::string label = sname + "." + std::to_string(c.index);
      auto bytes = reader.read_chunk(stream, c.index);
      if (!bytes) {
        r.error("MISSING_CHUNK", "chunk " + label + " listed in manifest is absent", sname,
                c.index);
        continue;
      }
      if (bytes->size() != c.byte_length)
        r.error("LENGTH_MISMATCH",
                "chunk " + label + " has " + std::to_string(bytes->size()) + " bytes, manifest says " +
                    std::to_string(c.byte_length),
                sname, c.index);
      if (checksum(*bytes) != c.digest)
        r.error("DIGEST_MISMATCH", "chunk " + label + " digest does not match manifest", sname,
                c.index);

      const ChunkScan scan = scan_chunk(*bytes);
      if (!scan.complete())
        r.error("RECORD_CRC",
                "chunk " + label + (scan.crc_failure ? " has a record with a bad CRC"
                                                     : " ends in a truncated record"),
                sname, c.index);
      if (c.record_count != 0 && scan.complete() && scan.payloads.size() != c.record_count)
        r.error("RECORD_COUNT", "chunk " + label + " record count differs from manifest", sname,
                c.index);

      for (auto payload_bytes : scan.payloads) {
        RecordPayload payload;
        try {
          payload = decode_payload(stream, payload_bytes);
        } catch (const Error& e) {
          r.error("SCHEMA", e.what(), sname, index);
          ++index;
          continue;
        }
        const int64_t t = record_time(payload);
        // One vehicle tick carries several PIDs sharing a timestamp.
        const auto* reading = std::get_if<VehiclePidReading>(&payload);
        const int key = reading ? (reading->mode << 8 | reading->pid) : -1;
        const auto prev = last_t_by_key.find(key);
        if (t < last_t || (prev != last_t_by_key.end() && t <= prev->second))
          r.error("T_ORDER", "timestamps out of order", sname, index);
        last_t = t;
        last_t_by_key[key] = t;
        if (index % static_cast<int64_t>(every) == 0) sampled.push_back({payload, index});
        last = Rec{std::move(payload), index};
        ++index;
      }
    }
    if (last && (sampled.empty() || sampled.back().index != last->index))
      sampled.push_back(*last);

    for (const auto& rec : sampled) {
      r.merge(validate_record(stream, rec.payload, m.consent, rec.index));
      if (options.extra_check) r.merge(options.extra_check(stream, rec.payload, rec.index));
    }
  }
  return r;
}

}  // namespace mobiscout::model
