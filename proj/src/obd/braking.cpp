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

#include "mobiscout/obd/braking.hpp"

#include <algorithm>
#include <optional>

namespace mobiscout::obd {

std::vector<BrakingEvent> detect_braking(std::span<const SpeedPoint> series) {
  std::vector<BrakingEvent> events;
  std::optional<BrakingEvent> run;

  auto close_run = [&] {
    if (run && run->t_end - run->t_start >= kBrakingMinDurationMs) events.push_back(*run);
    run.reset();
  };

  for (size_t i = 1; i < series.size(); ++i) {
    const auto& a = series[i - 1];
    const auto& b = series[i];
    const int64_t dt = b.t - a.t;
    if (dt <= 0) {
      close_run();
      continue;
    }
    const double decel_g = -((b.speed - a.speed) / 3.6) / (dt / 1000.0) / kStandardGravity;
    if (decel_g >= kBrakingThresholdG) {
      if (!run) run = BrakingEvent{a.t, b.t, decel_g};
      run->t_end = b.t;
      run->peak_decel = std::max(run->peak_decel, decel_g);
    } else {
      close_run();
    }
  }
  close_run();
  return events;
}

}  // namespace mobiscout::obd
