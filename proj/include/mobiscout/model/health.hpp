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

#include "mobiscout/model/types.hpp"

namespace mobiscout::model {

// Keeps, per category, the samples with
// reference_time - 5 days <= t <= reference_time, in chronological order.
HealthSnapshot summarize_health(const RawHealth& raw, int64_t reference_time);

}  // namespace mobiscout::model
