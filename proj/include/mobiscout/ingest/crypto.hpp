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

#include <array>
#include <string>
#include <string_view>

namespace mobiscout::ingest {

// 256-bit key for XChaCha20-Poly1305.
class MasterKey {
 public:
  static constexpr size_t kBytes = 32;

  // Parses 64 hex characters. Throws Error(kInvalidArgument).
  static MasterKey from_hex(std::string_view hex);
  static MasterKey random();

  const unsigned char* data() const { return bytes_.data(); }

 private:
  std::array<unsigned char, kBytes> bytes_{};
};

// Authenticated encryption with a fresh random nonce per call. Sealed blobs
// are "MSE1" | nonce (24 bytes) | ciphertext+tag, and bind `context` as
// associated data so a blob cannot be replayed under another name.
class Sealer {
 public:
  explicit Sealer(const MasterKey& key) : key_(key) {}

  std::string seal(std::string_view plaintext, std::string_view context) const;
  // Throws Error(kTampered) if authentication fails or the blob is malformed.
  std::string open(std::string_view blob, std::string_view context) const;

 private:
  MasterKey key_;
};

}  // namespace mobiscout::ingest
