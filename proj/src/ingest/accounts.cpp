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

#include "mobiscout/ingest/accounts.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstdio>

#include "mobiscout/common/error.hpp"
#include "mobiscout/common/files.hpp"
#include "mobiscout/model/serialize.hpp"

namespace mobiscout::ingest {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string hash_password(const std::string& password, const KdfCost& cost) {
  files::ensure_sodium();
  char out[crypto_pwhash_STRBYTES];
  if (crypto_pwhash_str_alg(out, password.data(), password.size(), cost.ops_limit,
                            cost.mem_limit, crypto_pwhash_ALG_ARGON2ID13) != 0)
    throw Error(Errc::kIo, "password hashing ran out of memory");
  return out;
}

bool verify_password(const std::string& hash, const std::string& password) {
  files::ensure_sodium();
  return crypto_pwhash_str_verify(hash.c_str(), password.data(), password.size()) == 0;
}

std::string new_code() {
  files::ensure_sodium();
  char buf[8];
  std::snprintf(buf, sizeof buf, "%06u", randombytes_uniform(1'000'000));
  return buf;
}

}  // namespace

KdfCost KdfCost::minimum() {
  return {crypto_pwhash_OPSLIMIT_MIN, crypto_pwhash_MEMLIMIT_MIN};
}

bool plausible_email(const std::string& email) {
  const auto at = email.find('@');
  if (at == std::string::npos || at == 0 || email.find('@', at + 1) != std::string::npos)
    return false;
  const auto domain = email.substr(at + 1);
  const auto dot = domain.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == domain.size()) return false;
  return std::none_of(email.begin(), email.end(),
                      [](unsigned char c) { return std::isspace(c) || c == '/' || c == '\\'; });
}

AccountStore::AccountStore(fs::path path, Clock& clock, Outbox& outbox, KdfCost cost)
    : path_(std::move(path)), clock_(clock), outbox_(outbox), cost_(cost) {
  if (!fs::exists(path_)) return;
  const auto j = json::parse(files::read_all(path_));
  for (const auto& a : j.at("accounts")) {
    Account acc;
    acc.user_id = a.at("userId");
    acc.email = a.at("email");
    acc.password_hash = a.at("passwordHash");
    acc.state = a.at("state") == "active" ? AccountState::kActive : AccountState::kPending;
    acc.pending_code = a.value("pendingCode", "");
    acc.code_expires_at = a.value("codeExpiresAt", int64_t{0});
    acc.code_failures = a.value("codeFailures", 0);
    acc.consent = a.at("consent").get<model::ConsentProfile>();
    accounts_[acc.user_id] = std::move(acc);
  }
}

void AccountStore::persist_locked() const {
  json list = json::array();
  for (const auto& [id, a] : accounts_) {
    list.push_back({{"userId", a.user_id},
                    {"email", a.email},
                    {"passwordHash", a.password_hash},
                    {"state", a.state == AccountState::kActive ? "active" : "pending"},
                    {"pendingCode", a.pending_code},
                    {"codeExpiresAt", a.code_expires_at},
                    {"codeFailures", a.code_failures},
                    {"consent", a.consent}});
  }
  fs::create_directories(path_.parent_path());
  files::write_atomic(path_, json{{"accounts", list}}.dump(2));
}

Account* AccountStore::by_email_locked(const std::string& email) {
  const std::string key = lower(email);
  for (auto& [id, a] : accounts_)
    if (a.email == key) return &a;
  return nullptr;
}

std::optional<Account> AccountStore::find_by_email(const std::string& email) const {
  std::lock_guard lock(mutex_);
  auto* a = const_cast<AccountStore*>(this)->by_email_locked(email);
  if (!a) return std::nullopt;
  return *a;
}

Account AccountStore::register_account(const std::string& email, const std::string& password) {
  if (!plausible_email(email)) throw Error(Errc::kInvalidArgument, "email address is not valid");
  if (password.size() < kMinPasswordLength)
    throw Error(Errc::kInvalidArgument, "password must have at least 8 characters");
  const std::string hash = hash_password(password, cost_);

  Account snapshot;
  {
    std::lock_guard lock(mutex_);
    Account* a = by_email_locked(email);
    if (a && a->state == AccountState::kActive)
      throw Error(Errc::kEmailTaken, "an account with this email already exists");
    if (!a) {
      Account fresh;
      fresh.user_id = files::new_uuid();
      fresh.email = lower(email);
      a = &accounts_.emplace(fresh.user_id, fresh).first->second;
    }
    a->password_hash = hash;
    a->pending_code = new_code();
    a->code_expires_at = clock_.now_ms() + kCodeLifetimeMs;
    a->code_failures = 0;
    persist_locked();
    snapshot = *a;
  }
  outbox_.send(snapshot.email, "MobiScout confirmation code",
               "Your confirmation code is " + snapshot.pending_code +
                   ". It expires in 15 minutes.");
  return snapshot;
}

Account AccountStore::confirm(const std::string& email, const std::string& code) {
  std::lock_guard lock(mutex_);
  Account* a = by_email_locked(email);
  if (!a) throw Error(Errc::kNotFound, "no account for this email");
  if (a->state == AccountState::kActive)
    throw Error(Errc::kInvalidState, "account is already confirmed");
  if (a->pending_code.empty())
    throw Error(Errc::kExpiredCode, "confirmation code was invalidated; register again");
  if (clock_.now_ms() > a->code_expires_at) {
    a->pending_code.clear();
    persist_locked();
    throw Error(Errc::kExpiredCode, "confirmation code expired; register again");
  }
  if (code != a->pending_code) {
    if (++a->code_failures >= kMaxCodeFailures) a->pending_code.clear();
    persist_locked();
    throw Error(Errc::kBadCode, "confirmation code does not match");
  }
  a->state = AccountState::kActive;
  a->pending_code.clear();
  a->code_failures = 0;
  persist_locked();
  return *a;
}

Session AccountStore::login(const std::string& email, const std::string& password) {
  Account account;
  {
    std::lock_guard lock(mutex_);
    Account* a = by_email_locked(email);
    if (!a) throw Error(Errc::kBadCredentials, "email or password is wrong");
    account = *a;
  }
  if (!verify_password(account.password_hash, password))
    throw Error(Errc::kBadCredentials, "email or password is wrong");
  if (account.state != AccountState::kActive)
    throw Error(Errc::kNotConfirmed, "registration is not confirmed yet");

  Session s{files::to_hex(files::random_bytes(32)), account.user_id,
            clock_.now_ms() + kTokenLifetimeMs};
  std::lock_guard lock(mutex_);
  sessions_[s.token] = s;
  return s;
}

std::string AccountStore::authenticate(const std::string& token) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) throw Error(Errc::kUnauthenticated, "missing or unknown token");
  if (clock_.now_ms() >= it->second.expires_at) {
    sessions_.erase(it);
    throw Error(Errc::kUnauthenticated, "token expired");
  }
  return it->second.user_id;
}

model::ConsentProfile AccountStore::consent(const std::string& user_id) const {
  std::lock_guard lock(mutex_);
  auto it = accounts_.find(user_id);
  if (it == accounts_.end()) throw Error(Errc::kNotFound, "unknown user");
  return it->second.consent;
}

model::ConsentProfile AccountStore::set_consent(const std::string& user_id,
                                                const model::ConsentProfile& c) {
  std::lock_guard lock(mutex_);
  auto it = accounts_.find(user_id);
  if (it == accounts_.end()) throw Error(Errc::kNotFound, "unknown user");
  it->second.consent = c;
  persist_locked();
  return c;
}

}  // namespace mobiscout::ingest
