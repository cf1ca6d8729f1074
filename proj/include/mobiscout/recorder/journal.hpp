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
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>

#include "mobiscout/model/checksum.hpp"
#include "mobiscout/model/manifest.hpp"
#include "mobiscout/model/types.hpp"

namespace mobiscout::recorder {

inline constexpr uint64_t kDefaultChunkBytes = 4u << 20;

struct JournalOptions {
  uint64_t max_chunk_bytes = kDefaultChunkBytes;
  // Total bytes the session may occupy before appends fail with DISK_FULL.
  // Zero means no limit besides the filesystem.
  uint64_t disk_quota_bytes = 0;
};

struct ChunkPosition {
  model::Stream stream = model::Stream::kMotion;
  uint32_t index = 0;
  uint64_t offset = 0;  // byte offset of the record within its chunk
};

// Append-only, per-stream chunked journal of one session. Records are
// written straight to the active chunk file; a chunk is closed (fsynced,
// digested, listed in the manifest) when the next record would push it past
// max_chunk_bytes. The manifest is rewritten atomically after every close.
class SessionJournal {
 public:
  using ChunkClosed = std::function<void(const model::ChunkInfo&)>;

  // Creates `dir` and writes the initial manifest.
  SessionJournal(std::filesystem::path dir, model::SessionManifest manifest,
                 JournalOptions options = {}, ChunkClosed on_closed = {});
  ~SessionJournal();
  SessionJournal(const SessionJournal&) = delete;
  SessionJournal& operator=(const SessionJournal&) = delete;

  // Throws Error(kDiskFull) or Error(kIo); the journal stays consistent and
  // can still be finalized.
  ChunkPosition append(model::Stream stream, const model::RecordPayload& payload);

  // Closes every active chunk and persists the manifest with `status`.
  const model::SessionManifest& finalize(model::SessionStatus status);

  model::SessionManifest manifest() const;
  const std::filesystem::path& dir() const { return dir_; }
  uint64_t bytes_written() const;

 private:
  struct Active {
    int fd = -1;
    uint32_t index = 0;
    uint64_t bytes = 0;
    uint64_t records = 0;
    model::Sha256 hash;
  };

  void close_chunk(model::Stream stream);
  void write_manifest();

  std::filesystem::path dir_;
  JournalOptions options_;
  ChunkClosed on_closed_;
  mutable std::mutex mutex_;
  model::SessionManifest manifest_;
  std::map<model::Stream, Active> active_;
  std::map<model::Stream, uint32_t> next_index_;
  uint64_t total_bytes_ = 0;
};

void write_manifest_file(const std::filesystem::path& session_dir,
                         const model::SessionManifest& manifest);
model::SessionManifest read_manifest_file(const std::filesystem::path& session_dir);

struct RecoveryResult {
  model::SessionManifest manifest;
  uint64_t recovered_chunks = 0;  // chunks added from unlisted files
  uint64_t dropped_bytes = 0;     // CRC-invalid or truncated tail removed
};

// Repairs a session left in `recording` by a crash: every chunk file not yet
// listed in the manifest is cut back to its CRC-valid prefix and listed, then
// the session is re-finalized. Listed chunks are never modified.
RecoveryResult recover_session(const std::filesystem::path& session_dir);

}  // namespace mobiscout::recorder
