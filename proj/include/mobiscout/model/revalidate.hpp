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
#include <functional>
#include <optional>
#include <string>

#include "mobiscout/model/manifest.hpp"
#include "mobiscout/model/types.hpp"

namespace mobiscout::model {

// Source of chunk bytes for a manifest: the agent's session directory or the
// server's decrypted store. Returns nullopt when the chunk is absent.
class ChunkReader {
 public:
  virtual ~ChunkReader() = default;
  virtual std::optional<std::string> read_chunk(Stream stream, uint32_t index) = 0;
};

struct RevalidateOptions {
  // Records whose per-stream index is a multiple of this are schema-checked,
  // plus the first and last record of every stream. 1 checks every record.
  uint64_t sample_every = 100;
  // Extra per-record check (e.g. OBD decode consistency). May be empty.
  std::function<ValidationReport(Stream, const RecordPayload&, int64_t)> extra_check;
};

// Recomputes every chunk digest and record CRC, enforces manifest-level
// invariants (consent, contiguous chunk indices, canonical units) and re-runs
// record validation over a deterministic systematic sample.
ValidationReport revalidate_manifest(const SessionManifest& manifest, ChunkReader& reader,
                                     const RevalidateOptions& options = {});

// Manifest-only checks, shared with the ingestion service.
ValidationReport check_manifest(const SessionManifest& manifest);

}  // namespace mobiscout::model
