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

#include "mobiscout/recorder/library.hpp"

#include <algorithm>

#include "mobiscout/common/error.hpp"
#include "mobiscout/common/files.hpp"
#include "mobiscout/model/record_codec.hpp"
#include "mobiscout/recorder/journal.hpp"

namespace mobiscout::recorder {

namespace fs = std::filesystem;
using model::SessionManifest;
using model::SessionStatus;
using model::Stream;

std::optional<std::string> DirectoryChunkReader::read_chunk(Stream stream, uint32_t index) {
  const auto path = dir_ / model::chunk_file_name(stream, index);
  if (!fs::exists(path)) return std::nullopt;
  return files::read_all(path);
}

Library::Library(fs::path data_dir) : root_(std::move(data_dir) / "sessions") {
  fs::create_directories(root_);
}

fs::path Library::session_dir(const std::string& session_id) const {
  if (session_id.empty() || session_id.find_first_of("/\\.") != std::string::npos)
    throw Error(Errc::kNotFound, "no session '" + session_id + "'");
  return root_ / session_id;
}

bool Library::exists(const std::string& session_id) const {
  try {
    return fs::exists(session_dir(session_id) / "manifest.json");
  } catch (const Error&) {
    return false;
  }
}

std::vector<SessionManifest> Library::list() const {
  std::vector<SessionManifest> out;
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (!entry.is_directory()) continue;
    try {
      out.push_back(read_manifest_file(entry.path()));
    } catch (const Error&) {
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const SessionManifest& a, const SessionManifest& b) {
    return a.created_at != b.created_at ? a.created_at > b.created_at : a.session_id < b.session_id;
  });
  return out;
}

SessionManifest Library::load(const std::string& session_id) const {
  return read_manifest_file(session_dir(session_id));
}

void Library::save(const SessionManifest& manifest) const {
  write_manifest_file(session_dir(manifest.session_id), manifest);
}

void Library::remove(const std::string& session_id) const {
  const auto dir = session_dir(session_id);
  const SessionManifest m = load(session_id);
  if (m.status == SessionStatus::kRecording)
    throw Error(Errc::kSessionActive, "session " + session_id + " is recording");
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().filename() != "manifest.json") fs::remove_all(entry.path());
  files::fsync_dir(dir);
  fs::remove(dir / "manifest.json");
  fs::remove(dir);
  files::fsync_dir(root_);
}

std::vector<model::RecordPayload> read_stream(const SessionManifest& manifest,
                                              model::ChunkReader& reader, Stream stream) {
  std::vector<model::RecordPayload> out;
  for (const auto& c : manifest.chunks_of(stream)) {
    const auto bytes = reader.read_chunk(stream, c.index);
    if (!bytes)
      throw Error(Errc::kMissingChunk, model::chunk_file_name(stream, c.index) + " is missing");
    const auto scan = model::scan_chunk(*bytes);
    if (!scan.complete())
      throw Error(Errc::kMalformed, model::chunk_file_name(stream, c.index) + " is damaged");
    for (auto p : scan.payloads) out.push_back(model::decode_payload(stream, p));
  }
  return out;
}

std::vector<model::JournalRecord> Library::open_stream(const std::string& session_id,
                                                       Stream stream) const {
  const SessionManifest m = load(session_id);
  if (m.status == SessionStatus::kRecording)
    throw Error(Errc::kSessionActive, "session " + session_id + " is recording");
  DirectoryChunkReader reader(session_dir(session_id));
  std::vector<model::JournalRecord> out;
  for (auto& p : read_stream(m, reader, stream)) out.push_back({stream, std::move(p)});
  return out;
}

std::vector<model::JournalRecord> Library::open(const std::string& session_id) const {
  std::vector<model::JournalRecord> out;
  for (Stream s : model::kAllStreams) {
    auto part = open_stream(session_id, s);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return model::record_time(a.payload) < model::record_time(b.payload);
  });
  return out;
}

std::vector<std::string> Library::recover_all() const {
  std::vector<std::string> recovered;
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (!entry.is_directory()) continue;
    try {
      if (read_manifest_file(entry.path()).status != SessionStatus::kRecording) continue;
      recover_session(entry.path());
      recovered.push_back(entry.path().filename().string());
    } catch (const Error&) {
    }
  }
  return recovered;
}

}  // namespace mobiscout::recorder
