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

#include "mobiscout/app/local_upload_api.hpp"

namespace mobiscout::app {

namespace {

sync::RemoteUpload remote_view(const ingest::ServerUpload& u) {
  sync::RemoteUpload r{u.upload_id, std::string(ingest::upload_state_name(u.state)), {}};
  for (const auto& c : u.confirmed) r.confirmed.insert({c.stream, c.index});
  return r;
}

}  // namespace

sync::RemoteUpload LocalUploadApi::create_upload(const model::SessionManifest& manifest) {
  return remote_view(service_.create_upload(token_, manifest));
}

uint64_t LocalUploadApi::put_chunk(const std::string& upload_id, sync::ChunkRef chunk,
                                   std::string_view bytes, const std::string& digest) {
  return service_.put_chunk(token_, upload_id, chunk.stream, chunk.index, bytes, digest);
}

sync::RemoteUpload LocalUploadApi::offset(const std::string& upload_id) {
  return remote_view(service_.get_offset(token_, upload_id));
}

model::ValidationReport LocalUploadApi::complete(const std::string& upload_id) {
  return service_.complete(token_, upload_id);
}

void LocalUploadApi::abort(const std::string& upload_id) { service_.abort(token_, upload_id); }

}  // namespace mobiscout::app
