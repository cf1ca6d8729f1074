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

#include "mobiscout/common/error.hpp"

namespace mobiscout {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kUnsupportedPair: return "UNSUPPORTED_PAIR";
    case Errc::kMissingChunk: return "MISSING_CHUNK";
    case Errc::kDigestMismatch: return "DIGEST_MISMATCH";
    case Errc::kInvalidArgument: return "INVALID_ARGUMENT";
    case Errc::kOutOfRange: return "OUT_OF_RANGE";
    case Errc::kNoData: return "NO_DATA";
    case Errc::kMalformed: return "MALFORMED";
    case Errc::kPidMismatch: return "PID_MISMATCH";
    case Errc::kTimeout: return "TIMEOUT";
    case Errc::kDisconnected: return "DISCONNECTED";
    case Errc::kNotConnected: return "NOT_CONNECTED";
    case Errc::kAlreadyRecording: return "ALREADY_RECORDING";
    case Errc::kNotRecording: return "NOT_RECORDING";
    case Errc::kConsentDenied: return "CONSENT_DENIED";
    case Errc::kObdUnavailable: return "OBD_UNAVAILABLE";
    case Errc::kDiskFull: return "DISK_FULL";
    case Errc::kNotFound: return "NOT_FOUND";
    case Errc::kSessionActive: return "SESSION_ACTIVE";
    case Errc::kInvalidState: return "INVALID_STATE";
    case Errc::kInvalidTransition: return "INVALID_TRANSITION";
    case Errc::kNetwork: return "NETWORK";
    case Errc::kEmailTaken: return "EMAIL_TAKEN";
    case Errc::kBadCode: return "BAD_CODE";
    case Errc::kExpiredCode: return "EXPIRED_CODE";
    case Errc::kBadCredentials: return "BAD_CREDENTIALS";
    case Errc::kNotConfirmed: return "NOT_CONFIRMED";
    case Errc::kUnauthenticated: return "UNAUTHENTICATED";
    case Errc::kForbidden: return "FORBIDDEN";
    case Errc::kUnknownUpload: return "UNKNOWN_UPLOAD";
    case Errc::kChunkNotInManifest: return "CHUNK_NOT_IN_MANIFEST";
    case Errc::kValidationFailed: return "VALIDATION_FAILED";
    case Errc::kGone: return "GONE";
    case Errc::kTampered: return "TAMPERED";
    case Errc::kIo: return "IO";
    case Errc::kBindFailure: return "BIND_FAILURE";
  }
  return "UNKNOWN";
}

}  // namespace mobiscout
