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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mobiscout/model/validation.hpp"
#include "mobiscout/recorder/journal.hpp"
#include "mobiscout/sim/scenario.hpp"

namespace mobiscout::app {

struct RunOptions {
  // Empty: a fresh temporary directory, removed when the run succeeds.
  std::filesystem::path work_dir;
  bool keep_work_dir = false;
  recorder::JournalOptions journal;
  // Reach the dongle emulator over TCP rather than in-process.
  bool obd_over_tcp = true;
  std::function<void(const std::string&)> log;
};

struct StreamCount {
  model::Stream stream = model::Stream::kMotion;
  uint64_t records = 0;
  uint32_t chunks = 0;
};

// What server and phone storage looked like across one dead zone.
struct ZoneObservation {
  int64_t start_ms = 0;  // relative to scenario start
  int64_t end_ms = 0;
  uint64_t server_bytes_min = 0;
  uint64_t server_bytes_max = 0;
  uint64_t local_bytes_at_entry = 0;
  uint64_t local_bytes_at_exit = 0;
  uint64_t calls_inside = 0;  // upload calls that reached the server

  bool server_static() const { return server_bytes_min == server_bytes_max && calls_inside == 0; }
  bool local_grew() const { return local_bytes_at_exit > local_bytes_at_entry; }
};

struct RunReport {
  std::string session_id;
  std::string upload_id;
  std::vector<StreamCount> streams;
  uint64_t local_bytes = 0;
  uint64_t server_bytes = 0;
  // SHA-256 over the ordered chunk digests; stable for a given scenario.
  std::string content_digest;
  std::vector<ZoneObservation> zones;
  model::ValidationReport server_report;
  std::vector<std::string> problems;
  std::filesystem::path work_dir;

  bool fidelity() const { return problems.empty(); }
};

// Registers a throwaway account over HTTP, records the whole scenario on a
// simulated clock, syncs it through the in-process ingestion server while
// honouring dead zones, then checks every stored chunk against the phone's
// copy.
RunReport run_scenario(const sim::Scenario& scenario, RunOptions options = {});

}  // namespace mobiscout::app
