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

#include <stdexcept>
#include <string>
#include <string_view>

namespace mobiscout {

// Error codes shared by every component. The textual names are part of the
// wire format (HTTP error bodies, CLI output) and must not change.
enum class Errc {
  kUnsupportedPair,
  kMissingChunk,
  kDigestMismatch,
  kInvalidArgument,
  kOutOfRange,
  kNoData,
  kMalformed,
  kPidMismatch,
  kTimeout,
  kDisconnected,
  kNotConnected,
  kAlreadyRecording,
  kNotRecording,
  kConsentDenied,
  kObdUnavailable,
  kDiskFull,
  kNotFound,
  kSessionActive,
  kInvalidState,
  kInvalidTransition,
  kNetwork,
  kEmailTaken,
  kBadCode,
  kExpiredCode,
  kBadCredentials,
  kNotConfirmed,
  kUnauthenticated,
  kForbidden,
  kUnknownUpload,
  kChunkNotInManifest,
  kValidationFailed,
  kGone,
  kTampered,
  kIo,
  kBindFailure,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  explicit Error(Errc code) : Error(code, std::string(errc_name(code))) {}

  Errc code() const noexcept { return code_; }
  std::string_view code_name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace mobiscout
