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
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>
#include "mobiscout/sync/upload_api.hpp"

namespace mobiscout::sync {

enum class TaskState { kQueued, kRunning, kPaused, kCanceled, kCompleted, kFailed };
enum class UploadMode { kLive, kDeferred };

std::string_view task_state_name(TaskState s) noexcept;
std::optional<TaskState> parse_task_state(std::string_view name) noexcept;
std::string_view upload_mode_name(UploadMode m) noexcept;
std::optional<UploadMode> parse_upload_mode(std::string_view name) noexcept;

// queued->running, queued->canceled, running->{paused, canceled, completed,
// failed}, paused->{running, canceled}, failed->queued.
bool legal_transition(TaskState from, TaskState to) noexcept;

struct UploadTask {
  std::string task_id;
  std::string session_id;
  UploadMode mode = UploadMode::kDeferred;
  TaskState state = TaskState::kQueued;
  uint64_t bytes_sent = 0;
  uint64_t bytes_total = 0;
  std::optional<ChunkRef> next_chunk;
  int attempts = 0;  // consecutive failed network calls
  std::optional<std::string> last_error;

  std::string upload_id;
  std::set<ChunkRef> confirmed;
  bool pending_abort = false;
  int64_t next_attempt_at = 0;
};

struct Progress {
  uint64_t bytes_sent = 0;
  uint64_t bytes_total = 0;
  double fraction = 0;
};

Progress progress_of(const UploadTask& t) noexcept;

void to_json(nlohmann::json& j, const UploadTask& t);
void from_json(const nlohmann::json& j, UploadTask& t);

}  // namespace mobiscout::sync
