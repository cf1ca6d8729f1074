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

#include "mobiscout/common/clock.hpp"

#include <thread>

namespace mobiscout {

int64_t SystemClock::now_ms() const {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch())
      .count();
}

void SystemClock::sleep_for_ms(int64_t ms) {
  if (ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(ms));
}

ScaledClock::ScaledClock(int64_t origin_ms, double factor)
    : origin_ms_(origin_ms),
      factor_(factor > 0 ? factor : 1.0),
      start_(std::chrono::steady_clock::now()) {}

int64_t ScaledClock::now_ms() const {
  using namespace std::chrono;
  const double real_ms =
      duration<double, std::milli>(steady_clock::now() - start_).count();
  return origin_ms_ + static_cast<int64_t>(real_ms * factor_);
}

void ScaledClock::sleep_for_ms(int64_t ms) {
  if (ms <= 0) return;
  std::this_thread::sleep_for(
      std::chrono::duration<double, std::milli>(static_cast<double>(ms) / factor_));
}

}  // namespace mobiscout
