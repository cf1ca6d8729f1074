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

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>

#include "mobiscout/model/manifest.hpp"

namespace mobiscout::sync {

struct ChunkRef {
  model::Stream stream = model::Stream::kMotion;
  uint32_t index = 0;
  auto operator<=>(const ChunkRef&) const = default;
};

// Server-side view of one upload.
struct RemoteUpload {
  std::string upload_id;
  std::string state;  // open | complete | rejected
  std::set<ChunkRef> confirmed;
};

// Client half of the upload protocol. Implementations throw Error(kNetwork)
// when the server cannot be reached and the server's own code otherwise.
class UploadApi {
 public:
  virtual ~UploadApi() = default;
  virtual RemoteUpload create_upload(const model::SessionManifest& manifest) = 0;
  virtual uint64_t put_chunk(const std::string& upload_id, ChunkRef chunk, std::string_view bytes,
                             const std::string& digest) = 0;
  virtual RemoteUpload offset(const std::string& upload_id) = 0;
  virtual model::ValidationReport complete(const std::string& upload_id) = 0;
  virtual void abort(const std::string& upload_id) = 0;
};

// Talks to the ingestion service over HTTP with a bearer token.
class HttpUploadApi final : public UploadApi {
 public:
  using TokenSource = std::function<std::string()>;
  HttpUploadApi(std::string base_url, TokenSource token);
  ~HttpUploadApi() override;

  RemoteUpload create_upload(const model::SessionManifest& manifest) override;
  uint64_t put_chunk(const std::string& upload_id, ChunkRef chunk, std::string_view bytes,
                     const std::string& digest) override;
  RemoteUpload offset(const std::string& upload_id) override;
  model::ValidationReport complete(const std::string& upload_id) override;
  void abort(const std::string& upload_id) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Simulated link in front of another UploadApi. While offline every call
// fails with kNetwork before reaching the inner API; such attempts are
// counted so tests can prove the engine stayed silent.
class ConnectivityGate final : public UploadApi {
 public:
  explicit ConnectivityGate(UploadApi& inner, bool online = true) : inner_(inner), online_(online) {}

  void set_online(bool online) { online_ = online; }
  bool online() const { return online_; }
  // Chunk payload bytes that reached the inner API.
  uint64_t bytes_delivered() const { return bytes_delivered_; }
  uint64_t calls_delivered() const { return calls_delivered_; }
  uint64_t offline_attempts() const { return offline_attempts_; }
  // The next `n` calls fail with kNetwork as if the link dropped mid-request.
  void fail_next(int n) { fail_next_ = n; }

  RemoteUpload create_upload(const model::SessionManifest& manifest) override;
  uint64_t put_chunk(const std::string& upload_id, ChunkRef chunk, std::string_view bytes,
                     const std::string& digest) override;
  RemoteUpload offset(const std::string& upload_id) override;
  model::ValidationReport complete(const std::string& upload_id) override;
  void abort(const std::string& upload_id) override;

 private:
  void admit();

  UploadApi& inner_;
  std::atomic<bool> online_;
  std::atomic<uint64_t> bytes_delivered_{0};
  std::atomic<uint64_t> calls_delivered_{0};
  std::atomic<uint64_t> offline_attempts_{0};
  std::atomic<int> fail_next_{0};
};

}  // namespace mobiscout::sync
