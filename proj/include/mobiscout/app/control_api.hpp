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

#include <json.hpp>
#include "mobiscout/app/agent.hpp"
#include "mobiscout/common/http.hpp"

namespace mobiscout::app {

nlohmann::json live_status_json(const recorder::LiveStatus& status);

// Local control surface of the agent under /control.
void mount_control_api(httplib::Server& server, Agent& agent);

}  // namespace mobiscout::app
