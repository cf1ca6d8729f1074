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

#include "mobiscout/ingest/outbox.hpp"

#include <cstdio>

#include "mobiscout/common/files.hpp"

namespace mobiscout::ingest {

namespace fs = std::filesystem;

SpoolOutbox::SpoolOutbox(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const auto name = entry.path().filename().string();
    uint64_t seq = 0;
    if (std::sscanf(name.c_str(), "%lu-", &seq) == 1) sequence_ = std::max(sequence_, seq);
  }
}

void SpoolOutbox::send(const std::string& to, const std::string& subject, const std::string& body) {
  std::lock_guard lock(mutex_);
  char prefix[32];
  std::snprintf(prefix, sizeof prefix, "%010lu-", static_cast<unsigned long>(++sequence_));
  std::string safe;
  for (char c : to) safe.push_back(c == '/' || c == '\\' ? '_' : c);
  const std::string message = "To: " + to + "\nSubject: " + subject + "\n\n" + body + "\n";
  files::write_atomic(dir_ / (prefix + safe + ".eml"), message);
}

std::optional<std::string> SpoolOutbox::latest_body(const std::string& to) const {
  const std::string suffix = "-" + to + ".eml";
  fs::path newest;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const auto name = entry.path().filename().string();
    if (name.ends_with(suffix) && (newest.empty() || name > newest.filename().string()))
      newest = entry.path();
  }
  if (newest.empty()) return std::nullopt;
  const std::string message = files::read_all(newest);
  const auto split = message.find("\n\n");
  return split == std::string::npos ? message : message.substr(split + 2);
}

}  // namespace mobiscout::ingest
