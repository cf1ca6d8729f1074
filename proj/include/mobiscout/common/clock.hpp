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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>

namespace mobiscout {

// Millisecond time source. Components never read the system clock directly so
// that tests can compress or freeze time.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual int64_t now_ms() const = 0;
  virtual void sleep_for_ms(int64_t ms) = 0;
  void sleep_until_ms(int64_t t) {
    const int64_t now = now_ms();
    if (t > now) sleep_for_ms(t - now);
  }
};

// Unix wall clock.
class SystemClock final : public Clock {
 public:
  int64_t now_ms() const override;
  void sleep_for_ms(int64_t ms) override;
};

// Runs `factor` times faster than the wall clock, starting at `origin_ms`.
class ScaledClock final : public Clock {
 public:
  ScaledClock(int64_t origin_ms, double factor);
  int64_t now_ms() const override;
  void sleep_for_ms(int64_t ms) override;
  double factor() const { return factor_; }

 private:
  int64_t origin_ms_;
  double factor_;
  std::chrono::steady_clock::time_point start_;
};

// Time only moves when told to. Sleeping advances the clock by the requested
// amount, which makes timeout paths instantaneous in tests.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(int64_t start_ms = 0) : now_(start_ms) {}
  int64_t now_ms() const override { return now_.load(); }
  void sleep_for_ms(int64_t ms) override { advance(ms); }
  void advance(int64_t ms) { now_.fetch_add(ms > 0 ? ms : 0); }
  void set(int64_t t) { now_.store(t); }

 private:
  std::atomic<int64_t> now_;
};

}  // namespace mobiscout
