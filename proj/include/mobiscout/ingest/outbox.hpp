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
#include <mutex>
#include <optional>
#include <string>

namespace mobiscout::ingest {

class Outbox {
 public:
  virtual ~Outbox() = default;
  virtual void send(const std::string& to, const std::string& subject, const std::string& body) = 0;
};

// Writes each message as an RFC 822-style text file into a spool directory,
// named "<sequence>-<recipient>.eml" so the newest sorts last.
class SpoolOutbox final : public Outbox {
 public:
  explicit SpoolOutbox(std::filesystem::path dir);
  void send(const std::string& to, const std::string& subject, const std::string& body) override;
  const std::filesystem::path& dir() const { return dir_; }
  // Body of the newest message spooled for `to`.
  std::optional<std::string> latest_body(const std::string& to) const;

 private:
  std::filesystem::path dir_;
  std::mutex mutex_;
  uint64_t sequence_ = 0;
};

}  // namespace mobiscout::ingest
