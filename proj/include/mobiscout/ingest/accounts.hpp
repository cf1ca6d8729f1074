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
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "mobiscout/common/clock.hpp"
#include "mobiscout/ingest/outbox.hpp"
#include "mobiscout/model/types.hpp"

namespace mobiscout::ingest {

inline constexpr int64_t kCodeLifetimeMs = 15 * 60 * 1000;
inline constexpr int kMaxCodeFailures = 3;
inline constexpr int64_t kTokenLifetimeMs = 24 * 3600 * 1000;
inline constexpr size_t kMinPasswordLength = 8;

enum class AccountState { kPending, kActive };

struct Account {
  std::string user_id;
  std::string email;
  std::string password_hash;  // Argon2id, libsodium string format
  AccountState state = AccountState::kPending;
  std::string pending_code;
  int64_t code_expires_at = 0;
  int code_failures = 0;
  model::ConsentProfile consent;
};

// Argon2id cost. Defaults are libsodium's interactive limits.
struct KdfCost {
  uint64_t ops_limit = 2;
  size_t mem_limit = 64u << 20;

  static KdfCost minimum();
};

struct Session {
  std::string token;
  std::string user_id;
  int64_t expires_at = 0;
};

// Accounts persisted as JSON under the server data directory; bearer tokens
// live in memory only.
class AccountStore {
 public:
  AccountStore(std::filesystem::path path, Clock& clock, Outbox& outbox, KdfCost cost = {});

  // Issues a fresh confirmation code; re-registering a pending address
  // replaces its password and code. Throws kInvalidArgument, kEmailTaken.
  Account register_account(const std::string& email, const std::string& password);
  // Throws kNotFound, kInvalidState, kBadCode, kExpiredCode.
  Account confirm(const std::string& email, const std::string& code);
  // Throws kBadCredentials, kNotConfirmed.
  Session login(const std::string& email, const std::string& password);
  // Returns the user id. Throws kUnauthenticated.
  std::string authenticate(const std::string& token);

  model::ConsentProfile consent(const std::string& user_id) const;
  model::ConsentProfile set_consent(const std::string& user_id, const model::ConsentProfile& c);
  std::optional<Account> find_by_email(const std::string& email) const;

 private:
  void persist_locked() const;
  Account* by_email_locked(const std::string& email);

  std::filesystem::path path_;
  Clock& clock_;
  Outbox& outbox_;
  KdfCost cost_;
  mutable std::mutex mutex_;
  std::map<std::string, Account> accounts_;  // by user id
  std::map<std::string, Session> sessions_;  // by token
};

bool plausible_email(const std::string& email);

}  // namespace mobiscout::ingest
