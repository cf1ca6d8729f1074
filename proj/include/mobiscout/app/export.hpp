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

#include <optional>
#include <ostream>
#include <string>

#include "mobiscout/recorder/library.hpp"

namespace mobiscout::app {

enum class ExportFormat { kCsv, kJson };

std::optional<ExportFormat> parse_export_format(std::string_view name);

// Writes one stream of a saved session for charting. CSV has a "t,<field>"
// header and one row per record; JSON is an array of record objects. An
// empty `field` picks the stream's default chart field. Returns the number
// of records written. Throws kInvalidArgument for a field the stream lacks.
size_t export_stream(const recorder::Library& library, const std::string& session_id,
                     model::Stream stream, ExportFormat format, const std::string& field,
                     std::ostream& out);

}  // namespace mobiscout::app
