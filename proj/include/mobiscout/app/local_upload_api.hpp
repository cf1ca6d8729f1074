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

#include <string>

#include "mobiscout/ingest/service.hpp"
#include "mobiscout/sync/upload_api.hpp"

namespace mobiscout::app {

// Calls an in-process ingestion service directly, skipping HTTP.
class LocalUploadApi final : public sync::UploadApi {
 public:
  LocalUploadApi(ingest::IngestionService& service, std::string token)
      : service_(service), token_(std::move(token)) {}

  void set_token(std::string token) { token_ = std::move(token); }

  sync::RemoteUpload create_upload(const model::SessionManifest& manifest) override;
  uint64_t put_chunk(const std::string& upload_id, sync::ChunkRef chunk, std::string_view bytes,
                     const std::string& digest) override;
  sync::RemoteUpload offset(const std::string& upload_id) override;
  model::ValidationReport complete(const std::string& upload_id) override;
  void abort(const std::string& upload_id) override;

 private:
  ingest::IngestionService& service_;
  std::string token_;
};

}  // namespace mobiscout::app
