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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace mobiscout::files {

std::string read_all(const std::filesystem::path& path);

// Writes to a sibling temp file, fsyncs it, renames over `path` and fsyncs
// the directory. Readers see either the old or the new content.
void write_atomic(const std::filesystem::path& path, std::string_view data);

void fsync_path(const std::filesystem::path& path);
void fsync_dir(const std::filesystem::path& dir);

// Lowercase hex.
std::string to_hex(std::string_view bytes);
std::string from_hex(std::string_view hex);

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);

// Initialises libsodium once; throws Error(kIo) if that fails.
void ensure_sodium();

std::string random_bytes(size_t n);
// RFC 4122 version 4.
std::string new_uuid();

}  // namespace mobiscout::files
