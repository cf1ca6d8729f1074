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

#include "mobiscout/ingest/service.hpp"

#include <algorithm>

#include "mobiscout/common/files.hpp"
#include "mobiscout/model/checksum.hpp"
#include "mobiscout/model/record_codec.hpp"
#include "mobiscout/model/revalidate.hpp"
#include "mobiscout/model/serialize.hpp"
#include "mobiscout/obd/codec.hpp"

namespace mobiscout::ingest {

namespace fs = std::filesystem;
using model::SessionManifest;
using model::Stream;
using model::ValidationReport;
using nlohmann::json;

std::string ValidationFailed::summary(const ValidationReport& r) {
  if (r.errors.empty()) return "validation failed";
  std::string s = r.errors.front().code + ": " + r.errors.front().message;
  if (r.errors.size() > 1) s += " (+" + std::to_string(r.errors.size() - 1) + " more)";
  return s;
}

std::string_view upload_state_name(UploadState s) noexcept {
  switch (s) {
    case UploadState::kOpen: return "open";
    case UploadState::kComplete: return "complete";
    case UploadState::kRejected: return "rejected";
  }
  return "?";
}

const ConfirmedChunk* ServerUpload::find(Stream s, uint32_t index) const {
  for (const auto& c : confirmed)
    if (c.stream == s && c.index == index) return &c;
  return nullptr;
}

uint64_t ServerUpload::confirmed_bytes() const {
  uint64_t n = 0;
  for (const auto& c : confirmed) n += c.byte_length;
  return n;
}

std::vector<size_t> minmax_downsample(const std::vector<double>& values, size_t target) {
  const size_t n = values.size();
  std::vector<size_t> keep;
  if (target == 0 || n <= target) {
    keep.resize(n);
    for (size_t i = 0; i < n; ++i) keep[i] = i;
    return keep;
  }
  for (size_t b = 0; b < target; ++b) {
    const size_t lo = b * n / target, hi = (b + 1) * n / target;
    if (lo >= hi) continue;
    size_t imin = lo, imax = lo;
    for (size_t i = lo + 1; i < hi; ++i) {
      if (values[i] < values[imin]) imin = i;
      if (values[i] > values[imax]) imax = i;
    }
    keep.push_back(std::min(imin, imax));
    if (imin != imax) keep.push_back(std::max(imin, imax));
  }
  return keep;
}

namespace {

constexpr const char* kRecordFile = "upload.sealed";

std::string upload_context(const std::string& id) { return "upload/" + id; }

std::string chunk_context(const std::string& id, Stream s, uint32_t index) {
  return id + "/" + std::string(model::stream_name(s)) + "/" + std::to_string(index);
}

json upload_to_json(const ServerUpload& u) {
  json confirmed = json::array();
  for (const auto& c : u.confirmed)
    confirmed.push_back({{"stream", model::stream_name(c.stream)},
                         {"index", c.index},
                         {"digest", c.digest},
                         {"byteLength", c.byte_length}});
  json j{{"uploadId", u.upload_id},     {"userId", u.user_id},
         {"sessionId", u.session_id},   {"createdAt", u.created_at},
         {"manifest", u.manifest},      {"confirmed", confirmed},
         {"state", upload_state_name(u.state)}};
  if (u.report) j["report"] = *u.report;
  return j;
}

ServerUpload upload_from_json(const json& j) {
  ServerUpload u;
  u.upload_id = j.at("uploadId");
  u.user_id = j.at("userId");
  u.session_id = j.at("sessionId");
  u.created_at = j.at("createdAt");
  u.manifest = j.at("manifest").get<SessionManifest>();
  for (const auto& c : j.at("confirmed"))
    u.confirmed.push_back({*model::parse_stream(c.at("stream").get<std::string>()),
                           c.at("index"), c.at("digest"), c.at("byteLength")});
  const std::string state = j.at("state");
  u.state = state == "complete" ? UploadState::kComplete
            : state == "rejected" ? UploadState::kRejected
                                  : UploadState::kOpen;
  if (j.contains("report")) u.report = j.at("report").get<ValidationReport>();
  return u;
}

json notification_to_json(const Notification& n) {
  return {{"id", n.id},           {"userId", n.user_id},       {"createdAt", n.created_at},
          {"uploadId", n.upload_id}, {"sessionId", n.session_id}, {"kind", n.kind},
          {"report", n.report}};
}

}  // namespace

IngestionService::IngestionService(ServiceOptions options, Clock& clock, Outbox& outbox)
    : options_(std::move(options)),
      clock_(clock),
      accounts_(options_.data_dir / "accounts.json", clock, outbox, options_.kdf),
      sealer_(options_.master_key) {
  fs::create_directories(options_.data_dir / "uploads");
  for (const auto& entry : fs::directory_iterator(options_.data_dir / "uploads")) {
    const auto record = entry.path() / kRecordFile;
    if (!fs::exists(record)) continue;
    const std::string id = entry.path().filename().string();
    auto plain = sealer_.open(files::read_all(record), upload_context(id));
    uploads_.emplace(id, upload_from_json(json::parse(plain)));
  }
  if (fs::exists(options_.data_dir / "tombstones.json"))
    for (const auto& t : json::parse(files::read_all(options_.data_dir / "tombstones.json")))
      tombstones_.insert(t.get<std::string>());
  fs::create_directories(options_.data_dir / "notifications");
  for (const auto& entry : fs::directory_iterator(options_.data_dir / "notifications")) {
    for (const auto& n : json::parse(files::read_all(entry.path()))) {
      Notification note{n.at("id"), n.at("userId"), n.at("createdAt"), n.at("uploadId"),
                        n.at("sessionId"), n.at("kind"), n.at("report").get<ValidationReport>()};
      notifications_[note.user_id].push_back(std::move(note));
    }
  }
}

fs::path IngestionService::upload_dir(const std::string& upload_id) const {
  return options_.data_dir / "uploads" / upload_id;
}

void IngestionService::persist_locked(const ServerUpload& u) const {
  const auto dir = upload_dir(u.upload_id);
  fs::create_directories(dir);
  files::write_atomic(dir / kRecordFile,
                      sealer_.seal(upload_to_json(u).dump(), upload_context(u.upload_id)));
}

void IngestionService::persist_notifications_locked(const std::string& user_id) const {
  json list = json::array();
  if (auto it = notifications_.find(user_id); it != notifications_.end())
    for (const auto& n : it->second) list.push_back(notification_to_json(n));
  files::write_atomic(options_.data_dir / "notifications" / (user_id + ".json"), list.dump(2));
}

void IngestionService::persist_tombstones_locked() const {
  files::write_atomic(options_.data_dir / "tombstones.json", json(tombstones_).dump());
}

void IngestionService::purge_chunks(const std::string& upload_id) const {
  fs::remove_all(upload_dir(upload_id) / "chunks");
}

ServerUpload& IngestionService::owned_locked(const std::string& user_id,
                                             const std::string& upload_id) {
  if (tombstones_.count(upload_id)) throw Error(Errc::kGone, "upload " + upload_id + " was aborted");
  auto it = uploads_.find(upload_id);
  if (it == uploads_.end()) throw Error(Errc::kUnknownUpload, "no upload " + upload_id);
  if (it->second.user_id != user_id) throw Error(Errc::kForbidden, "upload belongs to another user");
  return it->second;
}

ValidationReport IngestionService::consent_report(const SessionManifest& m,
                                                  const model::ConsentProfile& account) const {
  ValidationReport r;
  for (Stream s : m.streams) {
    const auto cat = model::category_of(s);
    if (!account.granted(cat))
      r.error("CONSENT_VIOLATION",
              "stream " + std::string(model::stream_name(s)) + " needs " +
                  std::string(model::category_name(cat)) + " consent, which the account denies",
              std::string(model::stream_name(s)));
  }
  if (m.health_snapshot && !account.health)
    r.error("CONSENT_VIOLATION", "health snapshot present but the account denies health consent");
  return r;
}

void IngestionService::reject_locked(ServerUpload& u, ValidationReport report) {
  u.state = UploadState::kRejected;
  u.report = report;
  u.confirmed.clear();
  purge_chunks(u.upload_id);
  persist_locked(u);
  notifications_[u.user_id].push_back({files::new_uuid(), u.user_id, clock_.now_ms(), u.upload_id,
                                       u.session_id, "VALIDATION_FAILED", std::move(report)});
  persist_notifications_locked(u.user_id);
}

model::ConsentProfile IngestionService::set_consent(const std::string& token,
                                                    const model::ConsentProfile& c) {
  return accounts_.set_consent(accounts_.authenticate(token), c);
}

model::ConsentProfile IngestionService::get_consent(const std::string& token) {
  return accounts_.consent(accounts_.authenticate(token));
}

ServerUpload IngestionService::create_upload(const std::string& token, SessionManifest manifest) {
  const std::string user = accounts_.authenticate(token);
  const auto account_consent = accounts_.consent(user);
  if (manifest.session_id.empty())
    throw Error(Errc::kInvalidArgument, "manifest has no sessionId");
  manifest.user_id = user;

  std::lock_guard lock(mutex_);
  ServerUpload* upload = nullptr;
  for (auto& [id, u] : uploads_) {
    if (u.user_id != user || u.session_id != manifest.session_id) continue;
    if (u.state == UploadState::kComplete) return u;
    if (u.state == UploadState::kOpen) upload = &u;
  }
  if (upload) {
    for (const auto& c : upload->confirmed) {
      const auto* listed = manifest.find_chunk(c.stream, c.index);
      if (!listed || listed->digest != c.digest)
        throw Error(Errc::kInvalidState, "refreshed manifest contradicts confirmed chunk " +
                                             model::chunk_file_name(c.stream, c.index));
    }
    upload->manifest = manifest;
  } else {
    ServerUpload fresh;
    fresh.upload_id = files::new_uuid();
    fresh.user_id = user;
    fresh.session_id = manifest.session_id;
    fresh.created_at = clock_.now_ms();
    fresh.manifest = manifest;
    upload = &uploads_.emplace(fresh.upload_id, fresh).first->second;
  }

  ValidationReport report = model::check_manifest(manifest);
  report.merge(consent_report(manifest, account_consent));
  if (!report.ok()) {
    reject_locked(*upload, report);
    throw ValidationFailed(report, upload->upload_id);
  }
  persist_locked(*upload);
  return *upload;
}

uint64_t IngestionService::put_chunk(const std::string& token, const std::string& upload_id,
                                     Stream stream, uint32_t index, std::string_view bytes,
                                     const std::string& digest) {
  const std::string user = accounts_.authenticate(token);
  const std::string actual = model::checksum(bytes);
  const std::string name = model::chunk_file_name(stream, index);
  {
    std::lock_guard lock(mutex_);
    ServerUpload& u = owned_locked(user, upload_id);
    if (const auto* done = u.find(stream, index); done && done->digest == actual)
      return u.confirmed.size();
    if (u.state != UploadState::kOpen)
      throw Error(Errc::kInvalidState, "upload is " + std::string(upload_state_name(u.state)));
    const auto* listed = u.manifest.find_chunk(stream, index);
    if (!listed) throw Error(Errc::kChunkNotInManifest, name + " is not in the manifest");
    if (digest != actual) throw Error(Errc::kDigestMismatch, name + " does not match its digest");
    if (listed->digest != actual)
      throw Error(Errc::kDigestMismatch, name + " differs from the manifest digest");
  }

  const auto dir = upload_dir(upload_id) / "chunks";
  fs::create_directories(dir);
  const auto path = dir / (name + ".sealed");
  files::write_atomic(path, sealer_.seal(bytes, chunk_context(upload_id, stream, index)));

  std::lock_guard lock(mutex_);
  ServerUpload* u = nullptr;
  try {
    u = &owned_locked(user, upload_id);
  } catch (const Error&) {
    fs::remove(path);
    throw;
  }
  if (u->state != UploadState::kOpen) {
    fs::remove(path);
    throw Error(Errc::kInvalidState, "upload is " + std::string(upload_state_name(u->state)));
  }
  if (!u->find(stream, index)) {
    u->confirmed.push_back({stream, index, actual, bytes.size()});
    persist_locked(*u);
  }
  return u->confirmed.size();
}

ServerUpload IngestionService::get_offset(const std::string& token, const std::string& upload_id) {
  const std::string user = accounts_.authenticate(token);
  std::lock_guard lock(mutex_);
  return owned_locked(user, upload_id);
}

std::string IngestionService::read_chunk(const std::string& upload_id, Stream stream,
                                         uint32_t index) {
  std::string digest;
  {
    std::lock_guard lock(mutex_);
    auto it = uploads_.find(upload_id);
    if (it == uploads_.end()) throw Error(Errc::kNotFound, "no upload " + upload_id);
    const auto* c = it->second.find(stream, index);
    if (!c) throw Error(Errc::kNotFound, model::chunk_file_name(stream, index) + " not stored");
    digest = c->digest;
  }
  const auto path = upload_dir(upload_id) / "chunks" / (model::chunk_file_name(stream, index) + ".sealed");
  if (!fs::exists(path)) throw Error(Errc::kNotFound, path.string() + " is missing");
  std::string plain = sealer_.open(files::read_all(path), chunk_context(upload_id, stream, index));
  if (model::checksum(plain) != digest)
    throw Error(Errc::kTampered, "decrypted chunk does not match its digest");
  return plain;
}

namespace {

class SealedReader final : public model::ChunkReader {
 public:
  SealedReader(IngestionService& service, const ServerUpload& upload, ValidationReport& problems)
      : service_(service), upload_(upload), problems_(problems) {}

  std::optional<std::string> read_chunk(Stream stream, uint32_t index) override {
    if (!upload_.find(stream, index)) return std::nullopt;
    try {
      return service_.read_chunk(upload_.upload_id, stream, index);
    } catch (const Error& e) {
      if (e.code() == Errc::kTampered)
        problems_.error("TAMPERED", e.what(), std::string(model::stream_name(stream)), index);
      return std::nullopt;
    }
  }

 private:
  IngestionService& service_;
  const ServerUpload& upload_;
  ValidationReport& problems_;
};

}  // namespace

ValidationReport IngestionService::complete(const std::string& token, const std::string& upload_id) {
  const std::string user = accounts_.authenticate(token);
  ServerUpload snapshot;
  {
    std::lock_guard lock(mutex_);
    ServerUpload& u = owned_locked(user, upload_id);
    if (u.state == UploadState::kComplete) return u.report.value_or(ValidationReport{});
    if (u.state == UploadState::kRejected)
      throw ValidationFailed(u.report.value_or(ValidationReport{}), upload_id);
    if (u.manifest.status == model::SessionStatus::kRecording)
      throw Error(Errc::kInvalidState, "session is still recording");
    snapshot = u;
  }

  ValidationReport problems;
  SealedReader reader(*this, snapshot, problems);
  model::RevalidateOptions options;
  options.sample_every = 1;
  options.extra_check = obd::decode_check;
  ValidationReport report = model::revalidate_manifest(snapshot.manifest, reader, options);
  report.merge(problems);
  report.merge(consent_report(snapshot.manifest, accounts_.consent(user)));

  std::lock_guard lock(mutex_);
  ServerUpload& u = owned_locked(user, upload_id);
  if (!report.ok()) {
    reject_locked(u, report);
    throw ValidationFailed(report, upload_id);
  }
  u.state = UploadState::kComplete;
  u.report = report;
  persist_locked(u);
  return report;
}

void IngestionService::abort(const std::string& token, const std::string& upload_id) {
  const std::string user = accounts_.authenticate(token);
  std::lock_guard lock(mutex_);
  owned_locked(user, upload_id);
  const auto dir = upload_dir(upload_id);
  purge_chunks(upload_id);
  fs::remove(dir / kRecordFile);
  fs::remove_all(dir);
  uploads_.erase(upload_id);
  tombstones_.insert(upload_id);
  persist_tombstones_locked();
}

std::vector<SessionManifest> IngestionService::list_sessions(const std::string& token) {
  const std::string user = accounts_.authenticate(token);
  std::vector<SessionManifest> out;
  std::lock_guard lock(mutex_);
  for (const auto& [id, u] : uploads_) {
    if (u.user_id != user || u.state != UploadState::kComplete) continue;
    out.push_back(u.manifest);
    out.back().status = model::SessionStatus::kUploaded;
  }
  std::sort(out.begin(), out.end(), [](const SessionManifest& a, const SessionManifest& b) {
    return a.created_at > b.created_at;
  });
  return out;
}

Series IngestionService::get_series(const std::string& token, const std::string& session_id,
                                    Stream stream, size_t points, const std::string& field,
                                    std::optional<int> pid) {
  const std::string user = accounts_.authenticate(token);
  ServerUpload upload;
  {
    std::lock_guard lock(mutex_);
    bool foreign = false;
    const ServerUpload* found = nullptr;
    for (const auto& [id, u] : uploads_) {
      if (u.session_id != session_id || u.state != UploadState::kComplete) continue;
      if (u.user_id == user)
        found = &u;
      else
        foreign = true;
    }
    if (!found) {
      if (foreign) throw Error(Errc::kForbidden, "session belongs to another user");
      throw Error(Errc::kNotFound, "no uploaded session " + session_id);
    }
    upload = *found;
  }

  Series series;
  series.session_id = session_id;
  series.stream = stream;
  series.field = field.empty() ? std::string(model::default_series_field(stream)) : field;
  if (stream == Stream::kVehicle && !pid) pid = 0x0D;

  std::vector<SeriesPoint> all;
  std::vector<double> values;
  for (const auto& c : upload.manifest.chunks_of(stream)) {
    const std::string bytes = read_chunk(upload.upload_id, stream, c.index);
    for (auto payload : model::scan_chunk(bytes).payloads) {
      const auto record = model::decode_payload(stream, payload);
      if (pid) {
        const auto* v = std::get_if<model::VehiclePidReading>(&record);
        if (v && v->pid != *pid) continue;
      }
      SeriesPoint p{model::record_time(record), model::numeric_fields(record)};
      const auto it = std::find_if(p.fields.begin(), p.fields.end(),
                                   [&](const auto& f) { return f.first == series.field; });
      if (it == p.fields.end()) continue;
      values.push_back(it->second);
      all.push_back(std::move(p));
    }
  }
  if (all.empty() && !upload.manifest.chunks_of(stream).empty())
    throw Error(Errc::kInvalidArgument, "stream has no numeric field '" + series.field + "'");
  series.source_count = all.size();
  for (size_t i : minmax_downsample(values, points)) series.points.push_back(std::move(all[i]));
  return series;
}

std::vector<Notification> IngestionService::notifications(const std::string& token) {
  const std::string user = accounts_.authenticate(token);
  std::lock_guard lock(mutex_);
  const auto it = notifications_.find(user);
  return it == notifications_.end() ? std::vector<Notification>{} : it->second;
}

}  // namespace mobiscout::ingest
