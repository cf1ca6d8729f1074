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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mobiscout/model/manifest.hpp"
#include "mobiscout/model/revalidate.hpp"

namespace mobiscout::recorder {

// Reads chunks straight from a session directory.
class DirectoryChunkReader final : public model::ChunkReader {
 public:
  explicit DirectoryChunkReader(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::optional<std::string> read_chunk(model::Stream stream, uint32_t index) override;

 private:
  std::filesystem::path dir_;
};

// Saved sessions under DATA_DIR/sessions/<sessionId>/.
class Library {
 public:
  explicit Library(std::filesystem::path data_dir);

  std::filesystem::path session_dir(const std::string& session_id) const;
  bool exists(const std::string& session_id) const;

  // Newest first by createdAt.
  std::vector<model::SessionManifest> list() const;
  // Throws Error(kNotFound).
  model::SessionManifest load(const std::string& session_id) const;
  void save(const model::SessionManifest& manifest) const;

  // Removes chunk files first and the manifest last. Throws kNotFound or
  // kSessionActive.
  void remove(const std::string& session_id) const;

  // Every record of a non-recording session, merged across streams in
  // non-decreasing timestamp order. Throws kNotFound or kSessionActive.
  std::vector<model::JournalRecord> open(const std::string& session_id) const;
  std::vector<model::JournalRecord> open_stream(const std::string& session_id,
                                                model::Stream stream) const;

  // Recovers every session a crash left in `recording`.
  std::vector<std::string> recover_all() const;

  const std::filesystem::path& sessions_root() const { return root_; }

 private:
  std::filesystem::path root_;
};

// Decodes all records of one stream in chunk order. Throws Error(kMalformed)
// on a damaged chunk and Error(kMissingChunk) on an absent one.
std::vector<model::RecordPayload> read_stream(const model::SessionManifest& manifest,
                                              model::ChunkReader& reader, model::Stream stream);

}  // namespace mobiscout::recorder
