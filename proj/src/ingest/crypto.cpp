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

#include "mobiscout/ingest/crypto.hpp"

#include <sodium.h>

#include <cstring>

#include "mobiscout/common/error.hpp"
#include "mobiscout/common/files.hpp"

namespace mobiscout::ingest {

namespace {

constexpr std::string_view kMagic = "MSE1";
constexpr size_t kNonceBytes = crypto_aead_xchacha20poly1305_ietf_NPUBBYTES;
constexpr size_t kTagBytes = crypto_aead_xchacha20poly1305_ietf_ABYTES;

const unsigned char* bytes_of(std::string_view s) {
  return reinterpret_cast<const unsigned char*>(s.data());
}

}  // namespace

MasterKey MasterKey::from_hex(std::string_view hex) {
  if (hex.size() != 2 * kBytes)
    throw Error(Errc::kInvalidArgument, "MASTER_KEY must be 64 hex characters");
  std::string raw;
  try {
    raw = files::from_hex(hex);
  } catch (const Error&) {
    throw Error(Errc::kInvalidArgument, "MASTER_KEY is not hex");
  }
  MasterKey key;
  std::memcpy(key.bytes_.data(), raw.data(), kBytes);
  return key;
}

MasterKey MasterKey::random() {
  const std::string raw = files::random_bytes(kBytes);
  MasterKey key;
  std::memcpy(key.bytes_.data(), raw.data(), kBytes);
  return key;
}

std::string Sealer::seal(std::string_view plaintext, std::string_view context) const {
  files::ensure_sodium();
  std::string out(kMagic);
  const std::string nonce = files::random_bytes(kNonceBytes);
  out += nonce;
  const size_t header = out.size();
  out.resize(header + plaintext.size() + kTagBytes);
  unsigned long long written = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(
      reinterpret_cast<unsigned char*>(out.data() + header), &written, bytes_of(plaintext),
      plaintext.size(), bytes_of(context), context.size(), nullptr, bytes_of(nonce), key_.data());
  out.resize(header + written);
  return out;
}

std::string Sealer::open(std::string_view blob, std::string_view context) const {
  files::ensure_sodium();
  const size_t header = kMagic.size() + kNonceBytes;
  if (blob.size() < header + kTagBytes || blob.substr(0, kMagic.size()) != kMagic)
    throw Error(Errc::kTampered, "sealed blob is malformed");
  const auto nonce = blob.substr(kMagic.size(), kNonceBytes);
  const auto cipher = blob.substr(header);
  std::string plain(cipher.size() - kTagBytes, '\0');
  unsigned long long written = 0;
  if (crypto_aead_xchacha20poly1305_ietf_decrypt(
          reinterpret_cast<unsigned char*>(plain.data()), &written, nullptr, bytes_of(cipher),
          cipher.size(), bytes_of(context), context.size(), bytes_of(nonce), key_.data()) != 0)
    throw Error(Errc::kTampered, "authentication failed");
  plain.resize(written);
  return plain;
}

}  // namespace mobiscout::ingest
