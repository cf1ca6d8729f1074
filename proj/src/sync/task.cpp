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

#include "mobiscout/sync/task.hpp"

#include "mobiscout/common/error.hpp"

namespace mobiscout::sync {

using nlohmann::json;

std::string_view task_state_name(TaskState s) noexcept {
  switch (s) {
    case TaskState::kQueued: return "queued";
    case TaskState::kRunning: return "running";
    case TaskState::kPaused: return "paused";
    case TaskState::kCanceled: return "canceled";
    case TaskState::kCompleted: return "completed";
    case TaskState::kFailed: return "failed";
  }
  return "?";
}

std::optional<TaskState> parse_task_state(std::string_view name) noexcept {
  for (auto s : {TaskState::kQueued, TaskState::kRunning, TaskState::kPaused, TaskState::kCanceled,
                 TaskState::kCompleted, TaskState::kFailed})
    if (task_state_name(s) == name) return s;
  return std::nullopt;
}

std::string_view upload_mode_name(UploadMode m) noexcept {
  return m == UploadMode::kLive ? "live" : "deferred";
}

std::optional<UploadMode> parse_upload_mode(std::string_view name) noexcept {
  if (name == "live") return UploadMode::kLive;
  if (name == "deferred") return UploadMode::kDeferred;
  return std::nullopt;
}

bool legal_transition(TaskState from, TaskState to) noexcept {
  using S = TaskState;
  switch (from) {
    case S::kQueued: return to == S::kRunning || to == S::kCanceled;
    case S::kRunning:
      return to == S::kPaused || to == S::kCanceled || to == S::kCompleted || to == S::kFailed;
    case S::kPaused: return to == S::kRunning || to == S::kCanceled;
    case S::kFailed: return to == S::kQueued;
    case S::kCanceled:
    case S::kCompleted: return false;
  }
  return false;
}

Progress progress_of(const UploadTask& t) noexcept {
  Progress p{t.bytes_sent, t.bytes_total, 0};
  if (t.state == TaskState::kCompleted)
    p.fraction = 1.0;
  else if (t.bytes_total > 0)
    p.fraction = static_cast<double>(t.bytes_sent) / static_cast<double>(t.bytes_total);
  return p;
}

namespace {

json chunk_json(ChunkRef c) { return {{"stream", model::stream_name(c.stream)}, {"index", c.index}}; }

ChunkRef chunk_from(const json& j) {
  const auto stream = model::parse_stream(j.at("stream").get<std::string>());
  if (!stream) throw Error(Errc::kMalformed, "unknown stream in task record");
  return {*stream, j.at("index").get<uint32_t>()};
}

}  // namespace

void to_json(json& j, const UploadTask& t) {
  json confirmed = json::array();
  for (const auto& c : t.confirmed) confirmed.push_back(chunk_json(c));
  j = {{"taskId", t.task_id},
       {"sessionId", t.session_id},
       {"mode", upload_mode_name(t.mode)},
       {"state", task_state_name(t.state)},
       {"bytesSent", t.bytes_sent},
       {"bytesTotal", t.bytes_total},
       {"nextChunk", t.next_chunk ? chunk_json(*t.next_chunk) : json(nullptr)},
       {"attempts", t.attempts},
       {"lastError", t.last_error ? json(*t.last_error) : json(nullptr)},
       {"uploadId", t.upload_id},
       {"confirmed", std::move(confirmed)},
       {"pendingAbort", t.pending_abort},
       {"progress", progress_of(t).fraction}};
}

void from_json(const json& j, UploadTask& t) {
  t.task_id = j.at("taskId");
  t.session_id = j.at("sessionId");
  const auto mode = parse_upload_mode(j.at("mode").get<std::string>());
  const auto state = parse_task_state(j.at("state").get<std::string>());
  if (!mode || !state) throw Error(Errc::kMalformed, "bad task record");
  t.mode = *mode;
  t.state = *state;
  t.bytes_sent = j.at("bytesSent");
  t.bytes_total = j.at("bytesTotal");
  t.next_chunk.reset();
  if (!j.at("nextChunk").is_null()) t.next_chunk = chunk_from(j.at("nextChunk"));
  t.attempts = j.at("attempts");
  t.last_error.reset();
  if (!j.at("lastError").is_null()) t.last_error = j.at("lastError").get<std::string>();
  t.upload_id = j.value("uploadId", "");
  t.confirmed.clear();
  for (const auto& c : j.value("confirmed", json::array())) t.confirmed.insert(chunk_from(c));
  t.pending_abort = j.value("pendingAbort", false);
}

}  // namespace mobiscout::sync
