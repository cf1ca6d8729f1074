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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mobiscout/common/clock.hpp"
#include "mobiscout/common/error.hpp"
#include "mobiscout/ingest/accounts.hpp"
#include "mobiscout/ingest/crypto.hpp"
#include "mobiscout/ingest/outbox.hpp"
#include "mobiscout/model/manifest.hpp"

namespace mobiscout::ingest {

// VALIDATION_FAILED carrying the full report.
class ValidationFailed : public Error {
 public:
  ValidationFailed(model::ValidationReport report, std::string upload_id)
      : Error(Errc::kValidationFailed, summary(report)),
        report_(std::move(report)),
        upload_id_(std::move(upload_id)) {}
  const model::ValidationReport& report() const { return report_; }
  const std::string& upload_id() const { return upload_id_; }

 private:
  static std::string summary(const model::ValidationReport& r);
  model::ValidationReport report_;
  std::string upload_id_;
};

enum class UploadState { kOpen, kComplete, kRejected };
std::string_view upload_state_name(UploadState s) noexcept;

struct ConfirmedChunk {
  model::Stream stream = model::Stream::kMotion;
  uint32_t index = 0;
  std::string digest;  // plaintext sha-256
  uint64_t byte_length = 0;

  bool operator==(const ConfirmedChunk&) const = default;
};

struct ServerUpload {
  std::string upload_id;
  std::string user_id;
  std::string session_id;
  int64_t created_at = 0;
  model::SessionManifest manifest;
  std::vector<ConfirmedChunk> confirmed;
  UploadState state = UploadState::kOpen;
  std::optional<model::ValidationReport> report;

  const ConfirmedChunk* find(model::Stream s, uint32_t index) const;
  uint64_t confirmed_bytes() const;
};

struct Notification {
  std::string id;
  std::string user_id;
  int64_t created_at = 0;
  std::string upload_id;
  std::string session_id;
  std::string kind;
  model::ValidationReport report;
};

struct SeriesPoint {
  int64_t t = 0;
  std::vector<std::pair<std::string, double>> fields;
};

struct Series {
  std::string session_id;
  model::Stream stream = model::Stream::kMotion;
  std::string field;
  uint64_t source_count = 0;
  std::vector<SeriesPoint> points;
};

// Keeps the records holding each bucket's minimum and maximum of `value`
// when there are more than `target` inputs; returns the input otherwise.
// Output is in input order and has at most 2 * target points.
std::vector<size_t> minmax_downsample(const std::vector<double>& values, size_t target);

struct ServiceOptions {
  std::filesystem::path data_dir;
  MasterKey master_key;
  KdfCost kdf;
};

// Server side of the upload protocol. Every data call takes a bearer token.
// Chunks and upload records are sealed under the master key; accounts and
// notifications hold no recorded data.
class IngestionService {
 public:
  IngestionService(ServiceOptions options, Clock& clock, Outbox& outbox);

  AccountStore& accounts() { return accounts_; }

  model::ConsentProfile set_consent(const std::string& token, const model::ConsentProfile& c);
  model::ConsentProfile get_consent(const std::string& token);

  // Creates an upload, or refreshes the manifest of the caller's open upload
  // for the same session and returns it. Throws ValidationFailed (the upload
  // is then kept as rejected).
  ServerUpload create_upload(const std::string& token, model::SessionManifest manifest);
  // Returns the number of confirmed chunks. Idempotent per (stream, index,
  // digest).
  uint64_t put_chunk(const std::string& token, const std::string& upload_id, model::Stream stream,
                     uint32_t index, std::string_view bytes, const std::string& digest);
  ServerUpload get_offset(const std::string& token, const std::string& upload_id);
  model::ValidationReport complete(const std::string& token, const std::string& upload_id);
  void abort(const std::string& token, const std::string& upload_id);

  std::vector<model::SessionManifest> list_sessions(const std::string& token);
  Series get_series(const std::string& token, const std::string& session_id, model::Stream stream,
                    size_t points, const std::string& field = {},
                    std::optional<int> pid = std::nullopt);
  std::vector<Notification> notifications(const std::string& token);

  // Decrypts one stored chunk and checks it against its digest. Throws
  // kTampered or kNotFound.
  std::string read_chunk(const std::string& upload_id, model::Stream stream, uint32_t index);

  std::filesystem::path upload_dir(const std::string& upload_id) const;
  const std::filesystem::path& data_dir() const { return options_.data_dir; }

 private:
  ServerUpload& owned_locked(const std::string& user_id, const std::string& upload_id);
  void persist_locked(const ServerUpload& u) const;
  void reject_locked(ServerUpload& u, model::ValidationReport report);
  void purge_chunks(const std::string& upload_id) const;
  void persist_notifications_locked(const std::string& user_id) const;
  void persist_tombstones_locked() const;
  model::ValidationReport consent_report(const model::SessionManifest& m,
                                         const model::ConsentProfile& account) const;

  ServiceOptions options_;
  Clock& clock_;
  AccountStore accounts_;
  Sealer sealer_;
  mutable std::mutex mutex_;
  std::map<std::string, ServerUpload> uploads_;
  std::set<std::string> tombstones_;
  std::map<std::string, std::vector<Notification>> notifications_;  // by user id
};

}  // namespace mobiscout::ingest
