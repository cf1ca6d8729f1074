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

#include <json.hpp>
#include "mobiscout/common/http.hpp"
#include "mobiscout/ingest/service.hpp"

namespace mobiscout::ingest {

inline constexpr const char* kDigestHeader = "X-Content-Digest";

nlohmann::json offset_json(const ServerUpload& upload);
nlohmann::json series_json(const Series& series);
nlohmann::json notification_json(const Notification& n);

// Registers the /v1 routes. Static console files are served under /console/
// when `console_dir` exists.
void mount_ingestion_api(httplib::Server& server, IngestionService& service,
                         const std::filesystem::path& console_dir = {});

}  // namespace mobiscout::ingest
