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

#include "mobiscout/recorder/journal.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "mobiscout/common/error.hpp"
#include "mobiscout/common/files.hpp"
#include "mobiscout/model/record_codec.hpp"
#include "mobiscout/model/serialize.hpp"

namespace mobiscout::recorder {

namespace fs = std::filesystem;
using model::ChunkInfo;
using model::SessionManifest;
using model::SessionStatus;
using model::Stream;

namespace {

constexpr const char* kManifestFile = "manifest.json";

[[noreturn]] void throw_errno(const std::string& what) {
  const int err = errno;
  throw Error(err == ENOSPC ? Errc::kDiskFull : Errc::kIo, what + ": " + std::strerror(err));
}

void write_fully(int fd, std::string_view data, const fs::path& path) {
  size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("write " + path.string());
    }
    off += static_cast<size_t>(n);
  }
}

}  // namespace

void write_manifest_file(const fs::path& session_dir, const SessionManifest& manifest) {
  files::write_atomic(session_dir / kManifestFile, nlohmann::json(manifest).dump(2));
}

SessionManifest read_manifest_file(const fs::path& session_dir) {
  const auto path = session_dir / kManifestFile;
  if (!fs::exists(path)) throw Error(Errc::kNotFound, "no manifest in " + session_dir.string());
  auto j = nlohmann::json::parse(files::read_all(path), nullptr, false);
  if (j.is_discarded()) throw Error(Errc::kMalformed, path.string() + " is not valid JSON");
  try {
    return j.get<SessionManifest>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kMalformed, path.string() + ": " + e.what());
  }
}

SessionJournal::SessionJournal(fs::path dir, SessionManifest manifest, JournalOptions options,
                               ChunkClosed on_closed)
    : dir_(std::move(dir)),
      options_(options),
      on_closed_(std::move(on_closed)),
      manifest_(std::move(manifest)) {
  fs::create_directories(dir_);
  for (const auto& c : manifest_.chunks)
    next_index_[c.stream] = std::max(next_index_[c.stream], c.index + 1);
  write_manifest();
}

SessionJournal::~SessionJournal() {
  for (auto& [stream, a] : active_)
    if (a.fd >= 0) ::close(a.fd);
}

ChunkPosition SessionJournal::append(Stream stream, const model::RecordPayload& payload) {
  const std::string framed = model::frame_record(model::encode_payload(payload));
  std::lock_guard lock(mutex_);
  if (manifest_.status != SessionStatus::kRecording)
    throw Error(Errc::kNotRecording, "journal is closed");
  if (options_.disk_quota_bytes && total_bytes_ + framed.size() > options_.disk_quota_bytes)
    throw Error(Errc::kDiskFull, "session exceeds its storage quota");

  auto it = active_.find(stream);
  if (it != active_.end() && it->second.bytes > 0 &&
      it->second.bytes + framed.size() > options_.max_chunk_bytes) {
    close_chunk(stream);
    it = active_.end();
  }
  if (it == active_.end()) {
    Active a;
    a.index = next_index_[stream]++;
    const auto path = dir_ / model::chunk_file_name(stream, a.index);
    a.fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (a.fd < 0) throw_errno("open " + path.string());
    it = active_.emplace(stream, std::move(a)).first;
  }

  Active& a = it->second;
  const ChunkPosition pos{stream, a.index, a.bytes};
  write_fully(a.fd, framed, dir_ / model::chunk_file_name(stream, a.index));
  a.hash.update(framed);
  a.bytes += framed.size();
  a.records += 1;
  total_bytes_ += framed.size();
  return pos;
}

void SessionJournal::close_chunk(Stream stream) {
  auto it = active_.find(stream);
  if (it == active_.end()) return;
  Active a = std::move(it->second);
  active_.erase(it);
  const auto path = dir_ / model::chunk_file_name(stream, a.index);
  const int rc = ::fsync(a.fd);
  ::close(a.fd);
  if (rc != 0) throw_errno("fsync " + path.string());

  ChunkInfo info{a.index, stream, a.bytes, a.hash.hex_digest(), a.records};
  manifest_.chunks.push_back(info);
  write_manifest();
  if (on_closed_) on_closed_(info);
}

void SessionJournal::write_manifest() { write_manifest_file(dir_, manifest_); }

const SessionManifest& SessionJournal::finalize(SessionStatus status) {
  std::lock_guard lock(mutex_);
  std::vector<Stream> open;
  for (const auto& [stream, a] : active_) open.push_back(stream);
  for (Stream s : open) close_chunk(s);
  manifest_.status = status;
  write_manifest();
  return manifest_;
}

SessionManifest SessionJournal::manifest() const {
  std::lock_guard lock(mutex_);
  return manifest_;
}

uint64_t SessionJournal::bytes_written() const {
  std::lock_guard lock(mutex_);
  return total_bytes_;
}

RecoveryResult recover_session(const fs::path& session_dir) {
  RecoveryResult result;
  result.manifest = read_manifest_file(session_dir);
  SessionManifest& m = result.manifest;
  if (m.status != SessionStatus::kRecording) return result;

  for (Stream stream : model::kAllStreams) {
    uint32_t index = 0;
    for (const auto& c : m.chunks)
      if (c.stream == stream) index = std::max(index, c.index + 1);
    for (;; ++index) {
      const auto path = session_dir / model::chunk_file_name(stream, index);
      if (!fs::exists(path)) break;
      const std::string bytes = files::read_all(path);
      const auto scan = model::scan_chunk(bytes);
      result.dropped_bytes += bytes.size() - scan.valid_bytes;
      if (scan.payloads.empty()) {
        for (uint32_t stale = index; fs::remove(session_dir / model::chunk_file_name(stream, stale));
             ++stale) {
        }
        break;
      }
      if (scan.valid_bytes != bytes.size()) {
        fs::resize_file(path, scan.valid_bytes);
      }
      files::fsync_path(path);
      const std::string_view valid(bytes.data(), scan.valid_bytes);
      m.chunks.push_back({index, stream, scan.valid_bytes, model::checksum(valid),
                          scan.payloads.size()});
      result.recovered_chunks += 1;
    }
  }
  m.status = SessionStatus::kFinalized;
  write_manifest_file(session_dir, m);
  return result;
}

}  // namespace mobiscout::recorder
