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

#include "mobiscout/model/health.hpp"

#include <algorithm>

namespace mobiscout::model {

namespace {

std::vector<double> window(const std::vector<HealthSample>& series, int64_t reference_time) {
  std::vector<HealthSample> kept;
  const int64_t start = reference_time - kHealthWindowMs;
  std::copy_if(series.begin(), series.end(), std::back_inserter(kept),
               [&](const HealthSample& s) { return s.t >= start && s.t <= reference_time; });
  std::stable_sort(kept.begin(), kept.end(),
                   [](const HealthSample& a, const HealthSample& b) { return a.t < b.t; });
  std::vector<double> values;
  values.reserve(kept.size());
  for (const auto& s : kept) values.push_back(s.value);
  return values;
}

}  // namespace

HealthSnapshot summarize_health(const RawHealth& raw, int64_t reference_time) {
  HealthSnapshot h;
  h.reference_time = reference_time;
  h.heart_rate = window(raw.heart_rate, reference_time);
  h.headphone_audio_exposure = window(raw.headphone_audio_exposure, reference_time);
  h.distance_walking_running = window(raw.distance_walking_running, reference_time);
  h.step_count = window(raw.step_count, reference_time);
  return h;
}

}  // namespace mobiscout::model
