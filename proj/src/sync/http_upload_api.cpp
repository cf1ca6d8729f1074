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

#include "mobiscout/common/http.hpp"
#include "mobiscout/model/serialize.hpp"
#include "mobiscout/sync/upload_api.hpp"

namespace mobiscout::sync {

using nlohmann::json;

namespace {

constexpr const char* kDigestHeader = "X-Content-Digest";

RemoteUpload parse_upload(const json& j) {
  RemoteUpload u;
  u.upload_id = j.at("uploadId");
  u.state = j.at("state");
  for (const auto& c : j.at("confirmed")) {
    const auto stream = model::parse_stream(c.at("stream").get<std::string>());
    if (!stream) throw Error(Errc::kMalformed, "server sent an unknown stream");
    u.confirmed.insert({*stream, c.at("index").get<uint32_t>()});
  }
  return u;
}

std::string chunk_path(const std::string& upload_id, ChunkRef c) {
  return "/v1/uploads/" + upload_id + "/chunks/" + std::string(model::stream_name(c.stream)) + "/" +
         std::to_string(c.index);
}

}  // namespace

struct HttpUploadApi::Impl {
  Impl(const std::string& base_url, TokenSource source) : client(base_url), token(std::move(source)) {
    client.set_connection_timeout(5);
    client.set_read_timeout(30);
    client.set_write_timeout(30);
  }

  httplib::Headers headers() const { return {{"Authorization", "Bearer " + token()}}; }

  // Turns a transport failure into kNetwork and an error status into the
  // server's code.
  json expect(const httplib::Result& res, int ok_status) {
    if (!res) throw Error(Errc::kNetwork, "request failed: " + httplib::to_string(res.error()));
    if (res->status != ok_status) throw http::error_from_response(res->status, res->body);
    if (res->body.empty()) return json::object();
    json j = json::parse(res->body, nullptr, false);
    if (j.is_discarded()) throw Error(Errc::kMalformed, "server sent invalid JSON");
    return j;
  }

  std::mutex mutex;  // httplib::Client is not safe for concurrent use
  httplib::Client client;
  TokenSource token;
};

HttpUploadApi::HttpUploadApi(std::string base_url, TokenSource token)
    : impl_(std::make_unique<Impl>(base_url, std::move(token))) {}

HttpUploadApi::~HttpUploadApi() = default;

RemoteUpload HttpUploadApi::create_upload(const model::SessionManifest& manifest) {
  std::lock_guard lock(impl_->mutex);
  return parse_upload(impl_->expect(
      impl_->client.Post("/v1/uploads", impl_->headers(), json(manifest).dump(), "application/json"), 201));
}

uint64_t HttpUploadApi::put_chunk(const std::string& upload_id, ChunkRef chunk, std::string_view bytes,
                                  const std::string& digest) {
  std::lock_guard lock(impl_->mutex);
  auto headers = impl_->headers();
  headers.emplace(kDigestHeader, digest);
  const auto j = impl_->expect(impl_->client.Put(chunk_path(upload_id, chunk), headers, bytes.data(),
                                                 bytes.size(), "application/octet-stream"),
                               200);
  return j.at("confirmed").get<uint64_t>();
}

RemoteUpload HttpUploadApi::offset(const std::string& upload_id) {
  std::lock_guard lock(impl_->mutex);
  return parse_upload(
      impl_->expect(impl_->client.Get("/v1/uploads/" + upload_id + "/offset", impl_->headers()), 200));
}

model::ValidationReport HttpUploadApi::complete(const std::string& upload_id) {
  std::lock_guard lock(impl_->mutex);
  const auto j = impl_->expect(
      impl_->client.Post("/v1/uploads/" + upload_id + "/complete", impl_->headers(), "", "application/json"),
      200);
  return j.at("report").get<model::ValidationReport>();
}

void HttpUploadApi::abort(const std::string& upload_id) {
  std::lock_guard lock(impl_->mutex);
  impl_->expect(impl_->client.Delete("/v1/uploads/" + upload_id, impl_->headers()), 204);
}

void ConnectivityGate::admit() {
  if (!online_) {
    ++offline_attempts_;
    throw Error(Errc::kNetwork, "offline");
  }
  if (fail_next_ > 0) {
    --fail_next_;
    throw Error(Errc::kNetwork, "link dropped");
  }
  ++calls_delivered_;
}

RemoteUpload ConnectivityGate::create_upload(const model::SessionManifest& manifest) {
  admit();
  return inner_.create_upload(manifest);
}

uint64_t ConnectivityGate::put_chunk(const std::string& upload_id, ChunkRef chunk, std::string_view bytes,
                                     const std::string& digest) {
  admit();
  bytes_delivered_ += bytes.size();
  return inner_.put_chunk(upload_id, chunk, bytes, digest);
}

RemoteUpload ConnectivityGate::offset(const std::string& upload_id) {
  admit();
  return inner_.offset(upload_id);
}

model::ValidationReport ConnectivityGate::complete(const std::string& upload_id) {
  admit();
  return inner_.complete(upload_id);
}

void ConnectivityGate::abort(const std::string& upload_id) {
  admit();
  inner_.abort(upload_id);
}

}  // namespace mobiscout::sync
