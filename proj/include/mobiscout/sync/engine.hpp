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

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mobiscout/common/clock.hpp"
#include "mobiscout/model/manifest.hpp"
#include "mobiscout/recorder/library.hpp"
#include "mobiscout/sync/task.hpp"
#include "mobiscout/sync/upload_api.hpp"

namespace mobiscout::sync {

// Where the engine reads local sessions from.
class SessionStore {
 public:
  virtual ~SessionStore() = default;
  // Throws Error(kNotFound).
  virtual model::SessionManifest manifest(const std::string& session_id) const = 0;
  virtual std::string read_chunk(const std::string& session_id, ChunkRef chunk) const = 0;
  virtual void mark_uploaded(const std::string& session_id) = 0;
};

class LibraryStore final : public SessionStore {
 public:
  explicit LibraryStore(const recorder::Library& library) : library_(library) {}
  model::SessionManifest manifest(const std::string& session_id) const override;
  std::string read_chunk(const std::string& session_id, ChunkRef chunk) const override;
  void mark_uploaded(const std::string& session_id) override;

 private:
  const recorder::Library& library_;
};

struct SyncOptions {
  std::filesystem::path data_dir;  // task records go to data_dir/uploads
  size_t concurrency = 2;
  int max_attempts = 10;
  int64_t backoff_base_ms = 1000;
  int64_t backoff_cap_ms = 60'000;
  bool durable = true;  // fsync task records
};

// min(cap, base * 2^(attempts - 1)) for attempts >= 1.
int64_t backoff_delay_ms(int attempts, const SyncOptions& options) noexcept;

struct Transition {
  std::string task_id;
  std::optional<TaskState> from;  // empty when the task was created
  TaskState to = TaskState::kQueued;
};

// Store-and-forward coordinator. Every state change goes through one mutex;
// network calls run outside it. Drive it with step() from a single thread or
// with start() for background workers.
class SyncEngine {
 public:
  SyncEngine(SyncOptions options, SessionStore& store, UploadApi& api, Clock& clock,
             bool online = true);
  ~SyncEngine();
  SyncEngine(const SyncEngine&) = delete;
  SyncEngine& operator=(const SyncEngine&) = delete;

  // Returns the session's live task if there is one; a failed task is
  // re-queued. Throws kNotFound or kInvalidState.
  UploadTask enqueue(const std::string& session_id, UploadMode mode);
  // Throw kNotFound or kInvalidTransition. pause and cancel return once the
  // task's in-flight call has settled.
  UploadTask pause(const std::string& task_id);
  UploadTask resume(const std::string& task_id);
  UploadTask cancel(const std::string& task_id);

  Progress progress(const std::string& task_id) const;
  UploadTask task(const std::string& task_id) const;
  std::optional<UploadTask> task_for_session(const std::string& session_id) const;
  std::vector<UploadTask> tasks() const;
  std::vector<Transition> transitions() const;

  void on_connectivity(bool online);
  bool online() const;
  // A live session has a new closed chunk or has stopped.
  void wake();

  // Runs one unit of work for each task that can make progress, up to the
  // concurrency limit. Returns how many units ran.
  size_t step();
  // True when no task can make progress without an outside event.
  bool quiescent() const;

  void start();
  void stop();

 private:
  struct Entry {
    UploadTask task;
    uint64_t seq = 0;
    bool in_flight = false;
    bool needs_offset = true;
    bool idle = false;  // live task waiting for new chunks
    std::optional<model::SessionManifest> posted;
  };
  struct Outcome;

  Entry& entry_locked(const std::string& task_id);
  const Entry& entry_locked(const std::string& task_id) const;
  void transition_locked(Entry& e, TaskState to);
  void persist_locked(const UploadTask& t) const;
  void promote_locked();
  bool runnable_locked(const Entry& e) const;
  std::vector<std::string> claim_locked(size_t limit);
  void wait_settled_locked(std::unique_lock<std::mutex>& lock, const std::string& task_id);
  void execute(const std::string& task_id);
  void worker_loop();

  SyncOptions options_;
  SessionStore& store_;
  UploadApi& api_;
  Clock& clock_;
  std::filesystem::path task_dir_;

  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::map<std::string, Entry> entries_;
  std::vector<Transition> transitions_;
  uint64_t next_seq_ = 0;
  bool online_;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace mobiscout::sync
