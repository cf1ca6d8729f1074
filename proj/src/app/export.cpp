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

#include "mobiscout/app/export.hpp"

#include <algorithm>
#include <cstdio>

#include "mobiscout/common/error.hpp"
#include "mobiscout/model/serialize.hpp"

namespace mobiscout::app {

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::optional<ExportFormat> parse_export_format(std::string_view name) {
  if (name == "csv") return ExportFormat::kCsv;
  if (name == "json") return ExportFormat::kJson;
  return std::nullopt;
}

size_t export_stream(const recorder::Library& library, const std::string& session_id,
                     model::Stream stream, ExportFormat format, const std::string& field,
                     std::ostream& out) {
  const auto records = library.open_stream(session_id, stream);
  if (format == ExportFormat::kJson) {
    auto list = nlohmann::json::array();
    for (const auto& r : records) list.push_back(model::payload_to_json(r.payload));
    out << list.dump(2) << '\n';
    return records.size();
  }

  const std::string column = field.empty() ? std::string(model::default_series_field(stream)) : field;
  std::string body;
  size_t rows = 0;
  for (const auto& r : records) {
    const auto fields = model::numeric_fields(r.payload);
    const auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.first == column; });
    if (it == fields.end()) continue;
    body += std::to_string(model::record_time(r.payload)) + "," + number(it->second) + "\n";
    ++rows;
  }
  if (rows == 0 && !records.empty())
    throw Error(Errc::kInvalidArgument, "stream has no numeric field '" + column + "'");
  out << "t," << column << '\n' << body;
  return rows;
}

}  // namespace mobiscout::app
