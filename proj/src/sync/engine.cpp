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

#include "mobiscout/sync/engine.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "mobiscout/common/error.hpp"
#include "mobiscout/common/files.hpp"

namespace mobiscout::sync {

namespace fs = std::filesystem;
using model::SessionManifest;
using model::SessionStatus;
using nlohmann::json;

model::SessionManifest LibraryStore::manifest(const std::string& session_id) const {
  return library_.load(session_id);
}

std::string LibraryStore::read_chunk(const std::string& session_id, ChunkRef chunk) const {
  recorder::DirectoryChunkReader reader(library_.session_dir(session_id));
  auto bytes = reader.read_chunk(chunk.stream, chunk.index);
  if (!bytes)
    throw Error(Errc::kMissingChunk, model::chunk_file_name(chunk.stream, chunk.index) + " is missing");
  return std::move(*bytes);
}

void LibraryStore::mark_uploaded(const std::string& session_id) {
  auto m = library_.load(session_id);
  if (m.status == SessionStatus::kRecording) return;
  m.status = SessionStatus::kUploaded;
  library_.save(m);
}

int64_t backoff_delay_ms(int attempts, const SyncOptions& options) noexcept {
  if (attempts <= 0) return 0;
  int64_t delay = options.backoff_base_ms;
  for (int i = 1; i < attempts && delay < options.backoff_cap_ms; ++i) delay *= 2;
  return std::min(delay, options.backoff_cap_ms);
}

namespace {

std::optional<ChunkRef> first_unconfirmed(const SessionManifest& m, const std::set<ChunkRef>& confirmed) {
  for (const auto& c : m.chunks)
    if (!confirmed.count({c.stream, c.index})) return ChunkRef{c.stream, c.index};
  return std::nullopt;
}

uint64_t confirmed_bytes(const SessionManifest& m, const std::set<ChunkRef>& confirmed) {
  uint64_t n = 0;
  for (const auto& c : m.chunks)
    if (confirmed.count({c.stream, c.index})) n += c.byte_length;
  return n;
}

bool lost_upload(Errc code) { return code == Errc::kGone || code == Errc::kUnknownUpload; }

}  // namespace

SyncEngine::SyncEngine(SyncOptions options, SessionStore& store, UploadApi& api, Clock& clock, bool online)
    : options_(std::move(options)),
      store_(store),
      api_(api),
      clock_(clock),
      task_dir_(options_.data_dir / "uploads"),
      online_(online) {
  if (options_.concurrency == 0) options_.concurrency = 1;
  fs::create_directories(task_dir_);
  std::vector<std::pair<fs::path, UploadTask>> loaded;
  for (const auto& entry : fs::directory_iterator(task_dir_)) {
    if (entry.path().extension() != ".json") continue;
    json j = json::parse(files::read_all(entry.path()), nullptr, false);
    if (j.is_discarded()) continue;
    loaded.emplace_back(entry.path(), j.get<UploadTask>());
  }
  std::sort(loaded.begin(), loaded.end(),
            [](const auto& a, const auto& b) { return fs::last_write_time(a.first) < fs::last_write_time(b.first); });
  for (auto& [path, task] : loaded) {
    Entry e;
    e.task = std::move(task);
    e.seq = next_seq_++;
    entries_.emplace(e.task.task_id, std::move(e));
  }
}

SyncEngine::~SyncEngine() { stop(); }

SyncEngine::Entry& SyncEngine::entry_locked(const std::string& task_id) {
  auto it = entries_.find(task_id);
  if (it == entries_.end()) throw Error(Errc::kNotFound, "no upload task " + task_id);
  return it->second;
}

const SyncEngine::Entry& SyncEngine::entry_locked(const std::string& task_id) const {
  auto it = entries_.find(task_id);
  if (it == entries_.end()) throw Error(Errc::kNotFound, "no upload task " + task_id);
  return it->second;
}

void SyncEngine::persist_locked(const UploadTask& t) const {
  const auto path = task_dir_ / (t.task_id + ".json");
  const std::string text = json(t).dump(2);
  if (options_.durable) {
    files::write_atomic(path, text);
    return;
  }
  auto tmp = path;
  tmp += ".tmp";
  std::ofstream(tmp, std::ios::binary | std::ios::trunc) << text;
  fs::rename(tmp, path);
}

void SyncEngine::transition_locked(Entry& e, TaskState to) {
  if (!legal_transition(e.task.state, to))
    throw Error(Errc::kInvalidTransition, std::string(task_state_name(e.task.state)) + " -> " +
                                              std::string(task_state_name(to)));
  transitions_.push_back({e.task.task_id, e.task.state, to});
  std::ofstream(task_dir_ / "transitions.log", std::ios::app)
      << e.task.task_id << ' ' << task_state_name(e.task.state) << ' ' << task_state_name(to) << ' '
      << clock_.now_ms() << '\n';
  e.task.state = to;
}

UploadTask SyncEngine::enqueue(const std::string& session_id, UploadMode mode) {
  std::unique_lock lock(mutex_);
  Entry* existing = nullptr;
  for (auto& [id, e] : entries_)
    if (e.task.session_id == session_id && e.task.state != TaskState::kCanceled &&
        (!existing || e.seq > existing->seq))
      existing = &e;
  if (existing) {
    if (existing->task.state == TaskState::kFailed) {
      transition_locked(*existing, TaskState::kQueued);
      existing->task.attempts = 0;
      existing->task.last_error.reset();
      existing->task.next_attempt_at = 0;
      existing->needs_offset = true;
      persist_locked(existing->task);
      cv_.notify_all();
    }
    return existing->task;
  }

  const SessionManifest m = store_.manifest(session_id);
  if (mode == UploadMode::kLive && m.status != SessionStatus::kRecording)
    throw Error(Errc::kInvalidState, "live upload needs a recording session");
  if (mode == UploadMode::kDeferred && m.status != SessionStatus::kFinalized &&
      m.status != SessionStatus::kUploaded)
    throw Error(Errc::kInvalidState, "session " + session_id + " is " + std::string(model::status_name(m.status)));

  Entry e;
  e.task.task_id = files::new_uuid();
  e.task.session_id = session_id;
  e.task.mode = mode;
  e.task.bytes_total = m.total_bytes();
  e.task.next_chunk = first_unconfirmed(m, {});
  e.seq = next_seq_++;
  transitions_.push_back({e.task.task_id, std::nullopt, TaskState::kQueued});
  persist_locked(e.task);
  const auto task = e.task;
  entries_.emplace(task.task_id, std::move(e));
  cv_.notify_all();
  return task;
}

void SyncEngine::wait_settled_locked(std::unique_lock<std::mutex>& lock, const std::string& task_id) {
  cv_.wait(lock, [&] { return !entry_locked(task_id).in_flight; });
}

UploadTask SyncEngine::pause(const std::string& task_id) {
  std::unique_lock lock(mutex_);
  Entry& e = entry_locked(task_id);
  transition_locked(e, TaskState::kPaused);
  persist_locked(e.task);
  wait_settled_locked(lock, task_id);
  return entry_locked(task_id).task;
}

UploadTask SyncEngine::resume(const std::string& task_id) {
  std::unique_lock lock(mutex_);
  Entry& e = entry_locked(task_id);
  transition_locked(e, TaskState::kRunning);
  e.needs_offset = true;
  e.idle = false;
  e.task.next_attempt_at = 0;
  persist_locked(e.task);
  cv_.notify_all();
  return e.task;
}

UploadTask SyncEngine::cancel(const std::string& task_id) {
  std::unique_lock lock(mutex_);
  {
    Entry& e = entry_locked(task_id);
    transition_locked(e, TaskState::kCanceled);
    e.task.pending_abort = !e.task.upload_id.empty();
    persist_locked(e.task);
  }
  wait_settled_locked(lock, task_id);
  Entry& e = entry_locked(task_id);
  if (online_ && e.task.pending_abort) {
    const std::string upload_id = e.task.upload_id;
    e.in_flight = true;
    lock.unlock();
    bool done = true;
    try {
      api_.abort(upload_id);
    } catch (const Error& err) {
      done = lost_upload(err.code());
    }
    lock.lock();
    Entry& after = entry_locked(task_id);
    after.in_flight = false;
    if (done) after.task.pending_abort = false;
    persist_locked(after.task);
    cv_.notify_all();
  }
  return entry_locked(task_id).task;
}

Progress SyncEngine::progress(const std::string& task_id) const {
  std::lock_guard lock(mutex_);
  return progress_of(entry_locked(task_id).task);
}

UploadTask SyncEngine::task(const std::string& task_id) const {
  std::lock_guard lock(mutex_);
  return entry_locked(task_id).task;
}

std::optional<UploadTask> SyncEngine::task_for_session(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  const Entry* best = nullptr;
  for (const auto& [id, e] : entries_)
    if (e.task.session_id == session_id && (!best || e.seq > best->seq)) best = &e;
  if (!best) return std::nullopt;
  return best->task;
}

std::vector<UploadTask> SyncEngine::tasks() const {
  std::lock_guard lock(mutex_);
  std::vector<const Entry*> ordered;
  for (const auto& [id, e] : entries_) ordered.push_back(&e);
  std::sort(ordered.begin(), ordered.end(), [](const Entry* a, const Entry* b) { return a->seq < b->seq; });
  std::vector<UploadTask> out;
  for (const auto* e : ordered) out.push_back(e->task);
  return out;
}

std::vector<Transition> SyncEngine::transitions() const {
  std::lock_guard lock(mutex_);
  return transitions_;
}

void SyncEngine::on_connectivity(bool online) {
  std::lock_guard lock(mutex_);
  if (online && !online_) {
    for (auto& [id, e] : entries_) {
      e.needs_offset = true;
      e.idle = false;
      e.task.next_attempt_at = 0;
    }
  }
  online_ = online;
  cv_.notify_all();
}

bool SyncEngine::online() const {
  std::lock_guard lock(mutex_);
  return online_;
}

void SyncEngine::wake() {
  std::lock_guard lock(mutex_);
  for (auto& [id, e] : entries_) e.idle = false;
  cv_.notify_all();
}

void SyncEngine::promote_locked() {
  size_t running = 0;
  std::vector<Entry*> queued;
  for (auto& [id, e] : entries_) {
    if (e.task.state == TaskState::kRunning) ++running;
    if (e.task.state == TaskState::kQueued) queued.push_back(&e);
  }
  std::sort(queued.begin(), queued.end(), [](const Entry* a, const Entry* b) { return a->seq < b->seq; });
  for (Entry* e : queued) {
    if (running >= options_.concurrency) break;
    transition_locked(*e, TaskState::kRunning);
    persist_locked(e->task);
    ++running;
  }
}

bool SyncEngine::runnable_locked(const Entry& e) const {
  if (e.in_flight || !online_) return false;
  if (e.task.state == TaskState::kCanceled) return e.task.pending_abort;
  return e.task.state == TaskState::kRunning && !e.idle && clock_.now_ms() >= e.task.next_attempt_at;
}

std::vector<std::string> SyncEngine::claim_locked(size_t limit) {
  size_t busy = 0;
  std::vector<Entry*> candidates;
  for (auto& [id, e] : entries_) {
    if (e.in_flight) ++busy;
    if (runnable_locked(e)) candidates.push_back(&e);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Entry* a, const Entry* b) { return a->seq < b->seq; });
  std::vector<std::string> claimed;
  for (Entry* e : candidates) {
    if (claimed.size() >= limit || busy >= options_.concurrency) break;
    e->in_flight = true;
    claimed.push_back(e->task.task_id);
    ++busy;
  }
  return claimed;
}

bool SyncEngine::quiescent() const {
  std::lock_guard lock(mutex_);
  size_t running = 0;
  for (const auto& [id, e] : entries_) {
    if (e.task.state == TaskState::kRunning) ++running;
    if (e.in_flight || runnable_locked(e)) return false;
  }
  for (const auto& [id, e] : entries_)
    if (e.task.state == TaskState::kQueued && running < options_.concurrency) return false;
  return true;
}

struct SyncEngine::Outcome {
  std::optional<SessionManifest> manifest;
  std::optional<SessionManifest> posted;
  std::optional<std::string> upload_id;
  std::optional<std::set<ChunkRef>> confirmed;
  bool completed = false;
  bool idle = false;
  bool aborted = false;
  std::optional<Error> error;
};

void SyncEngine::execute(const std::string& task_id) {
  UploadTask t;
  std::optional<SessionManifest> posted;
  bool needs_offset = false;
  {
    std::lock_guard lock(mutex_);
    const Entry& e = entry_locked(task_id);
    t = e.task;
    posted = e.posted;
    needs_offset = e.needs_offset;
  }

  Outcome o;
  try {
    if (t.state == TaskState::kCanceled) {
      try {
        api_.abort(t.upload_id);
      } catch (const Error& err) {
        if (!lost_upload(err.code())) throw;
      }
      o.aborted = true;
    } else {
      const SessionManifest m = store_.manifest(t.session_id);
      o.manifest = m;
      std::string upload_id = t.upload_id;
      std::set<ChunkRef> confirmed = t.confirmed;
      std::string remote_state = "open";
      if (upload_id.empty() || !posted || *posted != m) {
        const RemoteUpload r = api_.create_upload(m);
        upload_id = r.upload_id;
        confirmed = r.confirmed;
        remote_state = r.state;
        o.posted = m;
      } else if (needs_offset) {
        const RemoteUpload r = api_.offset(upload_id);
        confirmed = r.confirmed;
        remote_state = r.state;
      }
      o.upload_id = upload_id;
      o.confirmed = confirmed;
      if (remote_state == "rejected") throw Error(Errc::kValidationFailed, "server rejected the upload");
      if (remote_state == "complete") {
        o.completed = true;
      } else if (const auto next = first_unconfirmed(m, confirmed)) {
        const auto* info = m.find_chunk(next->stream, next->index);
        const std::string bytes = store_.read_chunk(t.session_id, *next);
        api_.put_chunk(upload_id, *next, bytes, info->digest);
        confirmed.insert(*next);
        o.confirmed = confirmed;
      } else if (m.status != SessionStatus::kRecording) {
        api_.complete(upload_id);
        o.completed = true;
      } else {
        o.idle = true;
      }
    }
  } catch (const Error& err) {
    o.error = err;
  }

  std::lock_guard lock(mutex_);
  Entry& e = entry_locked(task_id);
  e.in_flight = false;
  UploadTask& task = e.task;
  bool mark_uploaded = false;

  if (o.posted) e.posted = o.posted;
  if (o.upload_id && *o.upload_id != task.upload_id) {
    task.upload_id = *o.upload_id;
    if (task.state == TaskState::kCanceled) task.pending_abort = true;
  }
  if (o.aborted) task.pending_abort = false;

  if (task.state != TaskState::kCanceled) {
    if (o.confirmed) task.confirmed = *o.confirmed;
    if (o.manifest) {
      task.bytes_total = o.manifest->total_bytes();
      task.bytes_sent = confirmed_bytes(*o.manifest, task.confirmed);
      task.next_chunk = first_unconfirmed(*o.manifest, task.confirmed);
    }
    if (o.idle) e.idle = true;
  }

  if (o.error) {
    const Errc code = o.error->code();
    if (code == Errc::kNetwork) {
      ++task.attempts;
      task.next_attempt_at = clock_.now_ms() + backoff_delay_ms(task.attempts, options_);
      e.needs_offset = true;
      task.last_error = o.error->what();
      if (task.attempts >= options_.max_attempts && task.state == TaskState::kRunning)
        transition_locked(e, TaskState::kFailed);
    } else if (lost_upload(code) && task.state != TaskState::kCanceled) {
      task.upload_id.clear();
      task.confirmed.clear();
      e.posted.reset();
      e.needs_offset = true;
    } else if (task.state != TaskState::kCanceled) {
      task.last_error = std::string(o.error->code_name()) + ": " + o.error->what();
      if (task.state == TaskState::kRunning) transition_locked(e, TaskState::kFailed);
    }
  } else {
    task.attempts = 0;
    e.needs_offset = false;
    if (task.state != TaskState::kCanceled) task.last_error.reset();
    if (o.completed && task.state == TaskState::kRunning) {
      task.bytes_sent = task.bytes_total;
      task.next_chunk.reset();
      transition_locked(e, TaskState::kCompleted);
      mark_uploaded = true;
    }
  }
  persist_locked(task);
  if (mark_uploaded) {
    try {
      store_.mark_uploaded(task.session_id);
    } catch (const Error&) {
    }
  }
  cv_.notify_all();
}

size_t SyncEngine::step() {
  std::vector<std::string> claimed;
  {
    std::lock_guard lock(mutex_);
    promote_locked();
    claimed = claim_locked(options_.concurrency);
  }
  for (const auto& id : claimed) execute(id);
  return claimed.size();
}

void SyncEngine::start() {
  std::lock_guard lock(mutex_);
  if (!workers_.empty()) return;
  stopping_ = false;
  for (size_t i = 0; i < options_.concurrency; ++i) workers_.emplace_back([this] { worker_loop(); });
}

void SyncEngine::stop() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
    cv_.notify_all();
  }
  for (auto& w : workers_)
    if (w.joinable()) w.join();
  workers_.clear();
}

void SyncEngine::worker_loop() {
  using namespace std::chrono_literals;
  std::unique_lock lock(mutex_);
  auto last_sweep = std::chrono::steady_clock::now();
  while (!stopping_) {
    promote_locked();
    const auto claimed = claim_locked(1);
    if (claimed.empty()) {
      cv_.wait_for(lock, 50ms);
      // Live tasks also notice new chunks without an explicit wake().
      if (std::chrono::steady_clock::now() - last_sweep > 500ms) {
        for (auto& [id, e] : entries_) e.idle = false;
        last_sweep = std::chrono::steady_clock::now();
      }
      continue;
    }
    lock.unlock();
    execute(claimed.front());
    lock.lock();
  }
}

}  // namespace mobiscout::sync
