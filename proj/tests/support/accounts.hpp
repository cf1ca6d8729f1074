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

#include <filesystem>
#include <regex>
#include <string>

#include "mobiscout/common/error.hpp"
#include "mobiscout/common/files.hpp"
#include "mobiscout/ingest/accounts.hpp"

namespace mobiscout::testing {

// Latest confirmation code spooled for `email`.
inline std::string spooled_code(const std::filesystem::path& spool, const std::string& email) {
  std::filesystem::path newest;
  for (const auto& entry : std::filesystem::directory_iterator(spool)) {
    const auto name = entry.path().filename().string();
    if (name.size() > email.size() + 4 && name.ends_with("-" + email + ".eml") &&
        (newest.empty() || name > newest.filename().string()))
      newest = entry.path();
  }
  if (newest.empty()) throw Error(Errc::kNotFound, "no mail for " + email);
  const std::string text = files::read_all(newest);
  std::smatch m;
  if (!std::regex_search(text, m, std::regex("code is ([0-9]{6})")))
    throw Error(Errc::kMalformed, "no code in " + newest.string());
  return m[1];
}

// Registers, confirms through the spool and logs in. Returns the token.
inline std::string active_token(ingest::AccountStore& accounts, const std::filesystem::path& spool,
                                const std::string& email,
                                const std::string& password = "correct horse") {
  accounts.register_account(email, password);
  accounts.confirm(email, spooled_code(spool, email));
  return accounts.login(email, password).token;
}

}  // namespace mobiscout::testing
